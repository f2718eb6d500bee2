#include "jsrlab/io.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace jsrlab::io {

namespace {

/// Maps JSON pointers of a syntactically valid document to the line on which
/// each value starts. nlohmann::json drops positions after parsing.
class LineIndex {
 public:
  explicit LineIndex(std::string_view text) : text_(text) {
    skip_ws();
    if (pos_ < text_.size()) value("");
  }

  int line_of(std::string pointer) const {
    while (true) {
      auto it = lines_.find(pointer);
      if (it != lines_.end()) return it->second;
      if (pointer.empty()) return 1;
      pointer.erase(pointer.rfind('/'));
    }
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_token() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') ++pos_;
      if (pos_ < text_.size()) out += text_[pos_++];
    }
    ++pos_;
    return out;
  }

  void value(const std::string& path) {
    skip_ws();
    if (pos_ >= text_.size()) return;
    lines_.emplace(path, line_);
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      while (true) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] == '}') break;
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        std::string key = string_token();
        skip_ws();
        ++pos_;  // ':'
        value(path + "/" + key);
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      std::size_t index = 0;
      while (true) {
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] == ']') break;
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        value(path + "/" + std::to_string(index++));
      }
      ++pos_;
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && !std::strchr(",]} \t\r\n", text_[pos_])) ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::unordered_map<std::string, int> lines_;
};

class Reader {
 public:
  explicit Reader(const LineIndex& index) : index_(index) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& what,
                         Errc code = Errc::InvalidInput) const {
    throw Error(code, "line " + std::to_string(index_.line_of(pointer)) + ": " +
                                        (pointer.empty() ? "/" : pointer) + ": " + what);
  }

  double number(const json& j, const std::string& ptr) const {
    if (!j.is_number()) fail(ptr, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(ptr, "number is not finite");
    return v;
  }

  std::size_t positive_int(const json& j, const std::string& ptr) const {
    if (!j.is_number_integer() || j.get<long long>() < 1) fail(ptr, "expected a positive integer");
    return static_cast<std::size_t>(j.get<long long>());
  }

  const json& array(const json& j, const std::string& ptr) const {
    if (!j.is_array()) fail(ptr, "expected an array");
    return j;
  }

  Matrix matrix(const json& j, const std::string& ptr, std::size_t rows, std::size_t cols) const {
    array(j, ptr);
    if (j.size() != rows) fail(ptr, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      const std::string rp = ptr + "/" + std::to_string(r);
      array(j[r], rp);
      if (j[r].size() != cols) {
        fail(rp, "expected " + std::to_string(cols) + " entries, got " + std::to_string(j[r].size()));
      }
      for (std::size_t c = 0; c < cols; ++c) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            number(j[r][c], rp + "/" + std::to_string(c));
      }
    }
    return m;
  }

  HigherOrderChain::Tensor tensor(const json& j, const std::string& ptr, std::size_t len, std::size_t n) const {
    array(j, ptr);
    HigherOrderChain::Tensor t;
    for (std::size_t k = 0; k < j.size(); ++k) {
      const std::string ep = ptr + "/" + std::to_string(k);
      const json& e = j[k];
      if (!e.is_object() || !e.contains("indices") || !e.contains("value")) {
        fail(ep, "expected an object with \"indices\" and \"value\"");
      }
      const json& idx = array(e["indices"], ep + "/indices");
      if (idx.size() != len) fail(ep + "/indices", "expected " + std::to_string(len) + " indices");
      Word key;
      for (std::size_t i = 0; i < len; ++i) {
        const std::string ip = ep + "/indices/" + std::to_string(i);
        const std::size_t letter = positive_int(idx[i], ip);
        if (letter > n) {
          fail(ip, "index " + std::to_string(letter) + " exceeds " + std::to_string(n), Errc::IndexOutOfRange);
        }
        key.push_back(static_cast<Letter>(letter - 1));
      }
      if (t.count(key)) fail(ep, "duplicate entry " + format_word(key));
      t[key] = number(e["value"], ep + "/value");
    }
    return t;
  }

  /// Runs a model constructor, re-reporting its validation errors at ptr.
  template <class F>
  auto build(const std::string& ptr, F&& f) const {
    try {
      return f();
    } catch (const Error& e) {
      fail(ptr, e.detail(), e.code());
    }
  }

 private:
  const LineIndex& index_;
};

int line_of_byte(std::string_view text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

SystemSpec parse_spec(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::InvalidInput, "line " + std::to_string(line_of_byte(text, e.byte == 0 ? 0 : e.byte - 1)) +
                                        ": malformed JSON: " + e.what());
  }
  const LineIndex index(text);
  const Reader rd(index);
  if (!doc.is_object()) rd.fail("", "expected a JSON object");
  if (!doc.contains("matrices")) rd.fail("", "missing \"matrices\"");

  const json& mats = rd.array(doc["matrices"], "/matrices");
  if (mats.empty()) rd.fail("/matrices", "need at least one matrix");
  std::size_t dim = 0;
  if (doc.contains("dim")) {
    dim = rd.positive_int(doc["dim"], "/dim");
  } else {
    dim = rd.array(mats[0], "/matrices/0").size();
    if (dim == 0) rd.fail("/matrices/0", "empty matrix");
  }
  if (dim > static_cast<std::size_t>(kMaxDim)) {
    throw Error(Errc::DimensionTooLarge,
                "line " + std::to_string(index.line_of("/dim")) + ": dimension exceeds " + std::to_string(kMaxDim));
  }
  std::vector<Matrix> list;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    list.push_back(rd.matrix(mats[i], "/matrices/" + std::to_string(i), dim, dim));
  }
  const std::size_t n = list.size();

  std::string name;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) rd.fail("/name", "expected a string");
    name = doc["name"].get<std::string>();
  }

  std::optional<MarkovChain> chain;
  if (doc.contains("chain") && !doc["chain"].is_null()) {
    const json& c = doc["chain"];
    if (!c.is_object() || !c.contains("P")) rd.fail("/chain", "expected an object with \"P\"");
    Matrix p = rd.matrix(c["P"], "/chain/P", n, n);
    std::optional<Vector> nu;
    if (c.contains("nu") && !c["nu"].is_null()) {
      const json& jn = rd.array(c["nu"], "/chain/nu");
      if (jn.size() != n) rd.fail("/chain/nu", "expected " + std::to_string(n) + " entries");
      Vector v(static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        v(static_cast<Eigen::Index>(i)) = rd.number(jn[i], "/chain/nu/" + std::to_string(i));
      }
      nu = std::move(v);
    }
    chain = rd.build("/chain", [&] { return MarkovChain(std::move(p), std::move(nu)); });
  }

  std::optional<HigherOrderChain> hoc;
  if (doc.contains("higher_order") && !doc["higher_order"].is_null()) {
    const json& h = doc["higher_order"];
    if (!h.is_object() || !h.contains("m") || !h.contains("p_entries") || !h.contains("nu_entries")) {
      rd.fail("/higher_order", "expected an object with \"m\", \"p_entries\" and \"nu_entries\"");
    }
    const std::size_t m = rd.positive_int(h["m"], "/higher_order/m");
    auto p = rd.tensor(h["p_entries"], "/higher_order/p_entries", m + 1, n);
    auto nu = rd.tensor(h["nu_entries"], "/higher_order/nu_entries", m, n);
    hoc = rd.build("/higher_order", [&] { return HigherOrderChain(m, n, std::move(p), std::move(nu)); });
  }

  MatrixTuple tuple = rd.build("/matrices", [&] { return MatrixTuple(std::move(list)); });
  return SystemSpec{std::move(name), std::move(tuple), std::move(chain), std::move(hoc)};
}

SystemSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidInput, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

MarkovChain with_invariant(const MarkovChain& chain, std::string* note) {
  if (chain.has_nu()) {
    if (note) *note = "given";
    return chain;
  }
  const InvariantDecomposition inv = invariant_probabilities(chain);
  const std::size_t r = inv.extremes.size();
  if (note) *note = r == 1 ? "unique invariant probability" : "uniform mixture of " + std::to_string(r) +
                                                                  " extreme invariant probabilities";
  return chain.with_nu(inv.mix(std::vector<double>(r, 1.0 / static_cast<double>(r))));
}

json to_json(const Word& w) {
  json out = json::array();
  for (Letter l : w) out.push_back(l + 1);
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(number_or_null(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const JsrBracket& b) {
  return json{{"lower", b.lower},
              {"upper", b.upper},
              {"witness", to_json(b.lower_witness)},
              {"horizon", b.upper_horizon},
              {"norm", std::string(to_string(b.norm_kind))},
              {"width", b.width()},
              {"budget_exhausted", b.budget_exhausted},
              {"evaluated", b.evaluated}};
}

json to_json(const ExpectationCurve& c) {
  json pts = json::array();
  for (std::size_t i = 0; i < c.values.size(); ++i) pts.push_back({{"n", c.horizons[i]}, {"value", c.values[i]}});
  return pts;
}

json to_json(const McEstimate& e) {
  return json{{"mean", e.mean}, {"stderr", e.std_error}, {"n", e.horizon}, {"samples", e.samples}, {"seed", e.seed}};
}

json to_json(const CycleRecord& c) {
  return json{{"indices", to_json(c.indices)},
              {"kind", c.kind == CycleKind::SimpleCycle ? "SimpleCycle" : "ClosedWalk"},
              {"starting_index", c.starting_index + 1},
              {"probability_positive", c.probability_positive}};
}

json to_json(const EqualityVerdict& v) {
  json out{{"verdict", std::string(to_string(v.status))},
           {"max_len", v.max_len},
           {"tol", v.tol},
           {"count", v.cycles_checked},
           {"bracket", {{"lower", v.bracket.lower}, {"upper", v.bracket.upper}}}};
  if (v.status == VerdictStatus::Violated) {
    out["cycle"] = to_json(*v.cycle);
    out["value"] = v.value;
    out["ratio"] = v.ratio;
  }
  return out;
}

json to_json(const DistinctCycleResult& r) {
  json out{{"witness", r.witness ? to_json(*r.witness) : json(nullptr)},
           {"checked", r.checked},
           {"bracket", {{"lower", r.bracket.lower}, {"upper", r.bracket.upper}}}};
  if (r.witness) out["value"] = r.value;
  return out;
}

json to_json(const std::optional<OrthogonalCertificate>& c) {
  if (!c) return json{{"certificate", nullptr}, {"residuals", json::array()}};
  json res = json::array();
  for (double r : c->residuals) res.push_back(number_or_null(r));
  return json{{"certificate", {{"g", to_json(c->g)}, {"scale", c->scale}}}, {"residuals", std::move(res)}};
}

json to_json(const std::optional<FinitenessWitness>& w) {
  if (!w) return json{{"witness", nullptr}, {"order", nullptr}};
  return json{{"witness", to_json(w->word)},
              {"order", w->order},
              {"rho", w->rho},
              {"certified", w->certified},
              {"status", w->certified ? "certified" : "candidate"},
              {"bracket", {{"lower", w->bracket_lower}, {"upper", w->bracket_upper}}}};
}

json to_json(const IrreducibilityVerdict& v) {
  json out{{"status", std::string(to_string(v.status))}, {"algebra_dim", v.algebra_dim}};
  if (v.status == IrreducibilityStatus::Reducible) out["subspace"] = to_json(v.subspace);
  return out;
}

json to_json(const AnalysisReport& r) {
  json out;
  if (r.rho_d) {
    JsrBracket best = *r.rho_d;
    if (r.rho_d_bruteforce) {
      const auto& bf = *r.rho_d_bruteforce;
      if (detail::better_witness(bf.lower, bf.lower_witness, best.lower, best.lower_witness)) {
        best.lower = bf.lower;
        best.lower_witness = bf.lower_witness;
      }
      best.upper = std::min(best.upper, bf.upper);
    }
    out["rho_d"] = {{"lower", best.lower},
                    {"upper", best.upper},
                    {"witness", to_json(best.lower_witness)},
                    {"horizon", r.rho_d_bruteforce ? r.rho_d_bruteforce->upper_horizon : r.rho_d->upper_horizon},
                    {"gripenberg", to_json(*r.rho_d)},
                    {"bruteforce", r.rho_d_bruteforce ? to_json(*r.rho_d_bruteforce) : json(nullptr)}};
  } else {
    out["rho_d"] = nullptr;
  }
  if (r.rho_p || r.mc) {
    json p;
    if (r.rho_p) {
      p["curve"] = to_json(r.rho_p->curve);
      p["upper"] = r.rho_p->upper;
      p["argmin"] = r.rho_p->argmin;
      p["exact"] = r.rho_p->curve.exact;
      p["budget_exhausted"] = r.rho_p->budget_exhausted;
    }
    p["mc"] = r.mc ? to_json(*r.mc) : json(nullptr);
    out["rho_p"] = std::move(p);
  } else {
    out["rho_p"] = nullptr;
  }
  out["cycles"] = r.cycles ? to_json(*r.cycles) : json(nullptr);
  out["distinct_cycle"] = r.distinct_cycle ? to_json(*r.distinct_cycle) : json(nullptr);
  out["orthogonality"] = r.orthogonality ? to_json(*r.orthogonality) : json(nullptr);
  out["finiteness"] = r.finiteness ? to_json(*r.finiteness) : json(nullptr);
  out["ratio"] = r.ratio ? json{{"lower", r.ratio->first}, {"upper", r.ratio->second}} : json(nullptr);
  out["trivial"] = r.trivial;
  json errs = json::array();
  for (const auto& e : r.errors) {
    errs.push_back({{"section", e.section}, {"code", std::string(to_string(e.code))}, {"message", e.message}});
  }
  out["errors"] = std::move(errs);
  return out;
}

json example_spec(int which) {
  if (which == 1) {
    return json{{"name", "example1"},
                {"dim", 2},
                {"matrices", {{{1, 0}, {0, 1}}, {{0, 1}, {-1, 0}}, {{0, -0.5}, {1, 0}}}},
                {"chain", {{"P", {{0.5, 0.5, 0}, {0, 0, 1}, {1, 0, 0}}}, {"nu", {0.5, 0.25, 0.25}}}}};
  }
  if (which == 2) {
    return json{{"name", "example2"},
                {"dim", 3},
                {"matrices", {{{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}, {{0, 0, 0}, {0, 0, 0}, {1, 0, 0}}}},
                {"chain", {{"P", {{0.5, 0.5}, {0.5, 0.5}}}, {"nu", {0.5, 0.5}}}}};
  }
  throw Error(Errc::InvalidInput, "no example " + std::to_string(which));
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace jsrlab::io
