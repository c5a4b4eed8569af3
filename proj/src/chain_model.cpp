#include "xxchain/chain_model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "xxchain/error.hpp"

namespace xxchain {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError,
                "cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

ChainSpec ChainSpec::homogeneous(int n, double j, double h) {
  return ChainSpec{n, j, h, {}};
}

ChainSpec ChainSpec::single_impurity(int n, double alpha, double j, double h) {
  return ChainSpec{n, j, h, {{1, alpha}}};
}

ChainSpec ChainSpec::mirror_impurities(int n, double alpha, double j, double h) {
  ChainSpec spec{n, j, h, {{1, alpha}}};
  if (n - 1 > 1) spec.impurities.push_back({n - 1, alpha});
  return spec;
}

double ChainSpec::bond_strength(int bond) const {
  for (const auto& imp : impurities) {
    if (imp.bond == bond) return imp.alpha;
  }
  return 1.0;
}

bool ChainSpec::is_single_edge_impurity() const {
  return impurities.size() == 1 && impurities.front().bond == 1;
}

bool ChainSpec::is_mirror_pair() const {
  if (n_sites == 2) return is_single_edge_impurity();
  if (impurities.size() != 2) return false;
  const double a = bond_strength(1);
  const double b = bond_strength(n_sites - 1);
  const bool has_both = std::any_of(impurities.begin(), impurities.end(),
                                    [](const Impurity& i) { return i.bond == 1; }) &&
                        std::any_of(impurities.begin(), impurities.end(), [this](const Impurity& i) {
                          return i.bond == n_sites - 1;
                        });
  return has_both && a == b;
}

ChainSpec validate_spec(ChainSpec spec) {
  if (spec.n_sites < 2) {
    throw Error(ErrorCode::InvalidN, "n_sites must be >= 2, got " + std::to_string(spec.n_sites));
  }
  if (spec.exchange_j == 0.0) {
    throw Error(ErrorCode::ZeroCoupling, "exchange_j must be nonzero");
  }
  std::set<int> seen;
  for (const auto& imp : spec.impurities) {
    if (imp.bond < 1 || imp.bond > spec.n_sites - 1) {
      throw Error(ErrorCode::BadBond, "bond " + std::to_string(imp.bond) + " outside 1.." +
                                          std::to_string(spec.n_sites - 1));
    }
    if (!seen.insert(imp.bond).second) {
      throw Error(ErrorCode::BadBond, "duplicate bond " + std::to_string(imp.bond));
    }
    if (!(imp.alpha >= 0.0)) {
      throw Error(ErrorCode::NegativeAlpha,
                  "alpha on bond " + std::to_string(imp.bond) + " must be >= 0");
    }
  }
  return spec;
}

std::vector<std::string> spec_warnings(const ChainSpec& spec) {
  std::vector<std::string> out;
  if (spec.exchange_j > 0.0) {
    out.emplace_back(
        "exchange_j > 0: spectrum is mirrored relative to the J < 0 convention; eigenvector "
        "signs follow the (-1)^n parity transform");
  }
  return out;
}

std::vector<double> TridiagonalHamiltonian::apply(std::span<const double> x) const {
  const std::size_t n = size();
  std::vector<double> y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = diag[i] * x[i];
    if (i > 0) y[i] += offdiag[i - 1] * x[i - 1];
    if (i + 1 < n) y[i] += offdiag[i] * x[i + 1];
  }
  return y;
}

TridiagonalHamiltonian build_hamiltonian(const ChainSpec& spec) {
  const auto checked = validate_spec(spec);
  const auto n = static_cast<std::size_t>(checked.n_sites);
  TridiagonalHamiltonian h;
  h.diag.assign(n, checked.field_h);
  h.offdiag.assign(n - 1, checked.exchange_j);
  for (const auto& imp : checked.impurities) {
    h.offdiag[static_cast<std::size_t>(imp.bond - 1)] = imp.alpha * checked.exchange_j;
  }
  return h;
}

std::vector<Impurity> parse_impurities(std::string_view text) {
  std::vector<Impurity> out;
  text = trim(text);
  if (text.empty()) return out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::ParseError,
                  "impurity '" + std::string(item) + "' is not of the form bond:alpha");
    }
    out.push_back({parse_number<int>(item.substr(0, colon), "bond"),
                   parse_number<double>(item.substr(colon + 1), "alpha")});
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

ChainSpec parse_spec_config(std::istream& in) {
  ChainSpec spec;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const auto key = trim(body.substr(0, eq));
    const auto value = trim(body.substr(eq + 1));
    if (key == "n_sites") {
      spec.n_sites = parse_number<int>(value, "n_sites");
    } else if (key == "exchange_j") {
      spec.exchange_j = parse_number<double>(value, "exchange_j");
    } else if (key == "field_h") {
      spec.field_h = parse_number<double>(value, "field_h");
    } else if (key == "impurities") {
      spec.impurities = parse_impurities(value);
    } else {
      throw Error(ErrorCode::ParseError,
                  "line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
    }
  }
  return spec;
}

ChainSpec load_spec_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config '" + path + "'");
  return parse_spec_config(in);
}

}  // namespace xxchain
