// Copyright 2026 The brl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "brl/prior_io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "brl/error.hpp"

namespace brl {
namespace {

class Tokenizer {
 public:
  explicit Tokenizer(std::istream& in) : in_(in) {}

  std::string next() {
    while (pos_ >= tokens_.size()) {
      std::string line;
      if (!std::getline(in_, line))
        fail(ErrorCode::kParse, "unexpected end of prior file");
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos)
        line.erase(hash);
      std::istringstream ls(line);
      tokens_.clear();
      pos_ = 0;
      for (std::string t; ls >> t;) tokens_.push_back(t);
    }
    return tokens_[pos_++];
  }

  void expect(const std::string& keyword) {
    const std::string t = next();
    if (t != keyword)
      error("expected '" + keyword + "', found '" + t + "'");
  }

  double real() {
    const std::string t = next();
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0' || errno == ERANGE)
      error("malformed number '" + t + "'");
    return v;
  }

  std::size_t count() {
    const std::string t = next();
    char* end = nullptr;
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (t.empty() || t[0] == '-' || end == t.c_str() || *end != '\0')
      error("malformed count '" + t + "'");
    return static_cast<std::size_t>(v);
  }

  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::kParse,
         "prior file line " + std::to_string(line_no_) + ": " + what);
  }

 private:
  std::istream& in_;
  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

}  // namespace

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_prior(std::ostream& out, const Prior& prior) {
  const std::size_t S = prior.n_states(), A = prior.n_actions(),
                    C = prior.n_costs();
  out << "brl-prior 1\n";
  out << "states " << S << "\n";
  out << "actions " << A << "\n";
  out << "costs";
  for (double v : prior.costs().values()) out << ' ' << format_real(v);
  out << "\nc_max " << format_real(prior.c_max()) << "\n";
  out << "horizon " << prior.horizon() << "\n";
  out << "init";
  for (double p : prior.init()) out << ' ' << format_real(p);
  out << "\nmembers " << prior.size() << "\n";
  for (std::size_t k = 0; k < prior.size(); ++k) {
    const MdpData& d = prior.member(k).data();
    out << "member " << k << "\n";
    out << "weight " << format_real(prior.weight(k)) << "\n";
    out << "label " << prior.label(k) << "\n";
    if (d.is_joint()) {
      out << "joint\n";
      for (std::size_t sa = 0; sa < S * A; ++sa) {
        for (std::size_t i = 0; i < C * S; ++i)
          out << (i ? " " : "") << format_real(d.joint[sa * C * S + i]);
        out << "\n";
      }
    } else {
      out << "cost_table\n";
      for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a)
          out << (a ? " " : "") << d.cost_index[s * A + a];
        out << "\n";
      }
      out << "trans\n";
      for (std::size_t sa = 0; sa < S * A; ++sa) {
        for (std::size_t n = 0; n < S; ++n)
          out << (n ? " " : "") << format_real(d.trans[sa * S + n]);
        out << "\n";
      }
    }
  }
  out << "end\n";
}

Prior read_prior(std::istream& in) {
  Tokenizer tok(in);
  tok.expect("brl-prior");
  if (tok.count() != 1) tok.error("unsupported format version");
  tok.expect("states");
  const std::size_t S = tok.count();
  tok.expect("actions");
  const std::size_t A = tok.count();
  if (S == 0 || A == 0) tok.error("states and actions must be positive");
  tok.expect("costs");
  // The cost list is terminated by the c_max keyword.
  std::vector<double> cost_values;
  for (;;) {
    const std::string t = tok.next();
    if (t == "c_max") break;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0')
      tok.error("malformed cost value '" + t + "'");
    cost_values.push_back(v);
  }
  const double c_max = tok.real();
  CostSet costs(std::move(cost_values), c_max);
  const std::size_t C = costs.size();
  tok.expect("horizon");
  const std::size_t H = tok.count();
  tok.expect("init");
  std::vector<double> init(S);
  for (double& p : init) p = tok.real();
  tok.expect("members");
  const std::size_t K = tok.count();
  if (K == 0) tok.error("prior needs at least one member");

  std::vector<MdpPtr> members;
  std::vector<double> weights;
  std::vector<std::size_t> labels;
  for (std::size_t k = 0; k < K; ++k) {
    tok.expect("member");
    if (tok.count() != k) tok.error("members must be numbered in order");
    tok.expect("weight");
    weights.push_back(tok.real());
    tok.expect("label");
    labels.push_back(tok.count());
    MdpData d;
    d.n_states = S;
    d.n_actions = A;
    d.horizon = H;
    d.init = init;
    const std::string kind = tok.next();
    if (kind == "joint") {
      d.joint.resize(S * A * C * S);
      for (double& p : d.joint) p = tok.real();
    } else if (kind == "cost_table") {
      d.cost_index.resize(S * A);
      for (std::size_t& c : d.cost_index) c = tok.count();
      tok.expect("trans");
      d.trans.resize(S * A * S);
      for (double& p : d.trans) p = tok.real();
    } else {
      tok.error("expected 'joint' or 'cost_table', found '" + kind + "'");
    }
    members.push_back(std::make_shared<const TabularMdp>(std::move(d), costs));
  }
  tok.expect("end");
  return Prior(std::move(members), std::move(weights), std::move(costs),
               std::move(labels));
}

void save_prior(const std::string& path, const Prior& prior) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot open '" + path + "' for writing");
  write_prior(out, prior);
  if (!out) fail(ErrorCode::kIo, "failed writing '" + path + "'");
}

Prior load_prior(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open '" + path + "'");
  return read_prior(in);
}

}  // namespace brl
