#include <sstream>

#include "rideshare/solver.hpp"

namespace rideshare {

namespace {

std::string var_name(const LinearProgram& lp, int j) {
  if (j < static_cast<int>(lp.names.size()) && !lp.names[j].empty()) return lp.names[j];
  return "x" + std::to_string(j);
}

void write_terms(std::ostringstream& out, const LinearProgram& lp, const std::vector<Term>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    if (t.coef == 0.0) continue;
    if (!first || t.coef < 0.0) out << (t.coef < 0.0 ? " - " : " + ");
    const double mag = t.coef < 0.0 ? -t.coef : t.coef;
    if (mag != 1.0) out << mag << ' ';
    out << var_name(lp, t.var);
    first = false;
  }
  if (first) out << '0';
}

}  // namespace

std::string to_lp_text(const LinearProgram& lp) {
  std::ostringstream out;
  out.precision(17);
  out << (lp.sense == Sense::kMinimize ? "Minimize" : "Maximize") << "\n obj: ";
  std::vector<Term> obj;
  for (int j = 0; j < lp.num_vars(); ++j) obj.push_back({j, lp.objective[j]});
  write_terms(out, lp, obj);
  out << "\nSubject To\n";
  for (int i = 0; i < lp.num_rows(); ++i) {
    const auto& row = lp.rows[i];
    out << ' ' << (row.name.empty() ? "r" + std::to_string(i) : row.name) << ": ";
    write_terms(out, lp, row.terms);
    switch (row.cmp) {
      case Comparator::kLessEqual:
        out << " <= ";
        break;
      case Comparator::kEqual:
        out << " = ";
        break;
      case Comparator::kGreaterEqual:
        out << " >= ";
        break;
    }
    out << row.rhs << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    const double lo = lp.lower[j];
    const double hi = lp.upper[j];
    out << ' ';
    if (lo == -kInfinity && hi == kInfinity) {
      out << var_name(lp, j) << " free\n";
      continue;
    }
    if (lo == -kInfinity) {
      out << "-inf";
    } else {
      out << lo;
    }
    out << " <= " << var_name(lp, j) << " <= ";
    if (hi == kInfinity) {
      out << "+inf";
    } else {
      out << hi;
    }
    out << '\n';
  }
  out << "End\n";
  return out.str();
}

}  // namespace rideshare
