#include "aim/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace aim::cli {

namespace {

std::string rational_text(const numcore::Rational& q) { return q.str(); }

std::string real_text(const Real& x, int digits) { return numcore::decimal_string(x, digits); }

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string scalar_text(const BigScalar& z, int digits) {
  if (z.is_exact()) {
    const auto& re = z.exact_re();
    const auto& im = z.exact_im();
    if (im == 0) return rational_text(re);
    std::string out = re == 0 ? "" : rational_text(re);
    if (im < 0) {
      out += "-";
    } else if (!out.empty()) {
      out += "+";
    }
    const numcore::Rational a = im < 0 ? numcore::Rational(-im) : im;
    if (a != 1) out += rational_text(a) + "*";
    return out + "i";
  }
  const unsigned bits = z.precision();
  const Real re = z.re(bits), im = z.im(bits);
  if (numcore::is_zero(im)) return real_text(re, digits);
  std::string out = numcore::is_zero(re) ? "" : real_text(re, digits);
  const std::string i_text = real_text(im, digits);
  if (i_text[0] != '-' && !out.empty()) out += "+";
  return out + i_text + "*i";
}

nlohmann::json complex_json(const BigScalar& z, int digits) {
  if (z.is_exact()) {
    return {{"re", rational_text(z.exact_re())}, {"im", rational_text(z.exact_im())}};
  }
  const unsigned bits = z.precision();
  return {{"re", real_text(z.re(bits), digits)}, {"im", real_text(z.im(bits), digits)}};
}

nlohmann::json coeff_list(const numcore::NumPoly& p, int digits) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : p.coefficients()) out.push_back(scalar_text(c, digits));
  return out;
}

std::string diagnostics_csv(const engine::DiagnosticSeries& series, int nMax, int digits) {
  std::string out = "n,re_alpha,im_alpha,re_delta,im_delta,metric\n";
  for (const auto& e : series.entries) {
    if (e.n > nMax) break;
    const unsigned ba = std::max(e.alpha.precision(), numcore::kMinPrecision);
    const unsigned bd = std::max(e.perturbation.precision(), numcore::kMinPrecision);
    const unsigned bm = std::max(e.metric.precision(), numcore::kMinPrecision);
    out += std::to_string(e.n) + "," + real_text(e.alpha.re(ba), digits) + "," + real_text(e.alpha.im(ba), digits) +
           "," + real_text(e.perturbation.re(bd), digits) + "," + real_text(e.perturbation.im(bd), digits) + "," +
           real_text(numcore::abs_real(e.metric, bm), digits) + "\n";
  }
  return out;
}

std::string scatter_svg(const std::string& title, const std::string& xLabel, const std::string& yLabel,
                        const std::vector<PlotSeries>& series) {
  constexpr double W = 640, H = 400, L = 70, R = 20, T = 40, B = 50;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (first) {
        x0 = x1 = x;
        y0 = y1 = y;
        first = false;
      }
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) {
    y0 -= 0.5;
    y1 += 0.5;
  }
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << xml_escape(title)
     << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << L << "\" y=\"" << H - B + 16 << "\" font-size=\"11\">" << fmt_double(x0) << "</text>\n";
  os << "<text x=\"" << W - R << "\" y=\"" << H - B + 16 << "\" font-size=\"11\" text-anchor=\"end\">"
     << fmt_double(x1) << "</text>\n";
  os << "<text x=\"" << L - 4 << "\" y=\"" << H - B << "\" font-size=\"11\" text-anchor=\"end\">" << fmt_double(y0)
     << "</text>\n";
  os << "<text x=\"" << L - 4 << "\" y=\"" << T + 10 << "\" font-size=\"11\" text-anchor=\"end\">"
     << fmt_double(y1) << "</text>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
     << xml_escape(xLabel) << "</text>\n";
  os << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 "
     << H / 2 << ")\">" << xml_escape(yLabel) << "</text>\n";
  if (y0 < 0 && y1 > 0) {
    os << "<line x1=\"" << L << "\" y1=\"" << py(0) << "\" x2=\"" << W - R << "\" y2=\"" << py(0)
       << "\" stroke=\"#bbb\"/>\n";
  }
  double ly = T + 14;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      os << "<circle cx=\"" << fmt_double(px(x)) << "\" cy=\"" << fmt_double(py(y)) << "\" r=\"2\" fill=\""
         << s.color << "\"/>\n";
    }
    os << "<text x=\"" << W - R - 6 << "\" y=\"" << ly << "\" font-size=\"11\" text-anchor=\"end\" fill=\""
       << s.color << "\">" << xml_escape(s.label) << "</text>\n";
    ly += 14;
  }
  os << "</svg>\n";
  return os.str();
}

nlohmann::json eigen_result_json(const eigen::EigenResult& r, int digits, bool timing) {
  nlohmann::json j;
  j["k"] = r.k;
  j["E"] = real_text(r.E, digits + 2);
  j["iterations"] = r.iterations;
  j["stableDigits"] = r.stableDigits;
  j["stabilized"] = r.stabilized;
  j["residual"] = real_text(r.residual, 6);
  j["bits"] = r.bits;
  j["seconds"] = timing ? std::round(r.seconds * 1000.0) / 1000.0 : 0.0;
  return j;
}

std::string escalation_csv(const std::vector<eigen::EigenResult>& results, int digits) {
  std::string out = "k,n,E\n";
  for (const auto& r : results) {
    for (const auto& t : r.trace) {
      out += std::to_string(r.k) + "," + std::to_string(t.n) + "," + real_text(t.E, digits + 2) + "\n";
    }
  }
  return out;
}

nlohmann::json chain_link_json(const chain::ChainLink& link, const BigScalar& residual,
                               const std::optional<numcore::NumPoly>& polynomial, int digits) {
  nlohmann::json j;
  j["level"] = link.level;
  j["deltaNumeratorCoeffs"] = coeff_list(link.perturb.numeric_num(), digits);
  j["deltaDenominatorCoeffs"] = coeff_list(link.perturb.numeric_den(), digits);
  j["expPolyCoeffs"] = coeff_list(link.solution.exp_poly, digits);
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& f : link.solution.factors) {
    factors.push_back({{"root", complex_json(f.root, digits)}, {"exponent", complex_json(f.exponent, digits)}});
  }
  j["factors"] = factors;
  if (link.solution.exp_rational) {
    j["expRational"] = {{"numeratorCoeffs", coeff_list(link.solution.exp_rational->numeric_num(), digits)},
                        {"denominatorCoeffs", coeff_list(link.solution.exp_rational->numeric_den(), digits)}};
  }
  j["terminated"] = link.perturb.is_zero();
  if (polynomial) j["polynomialSolution"] = coeff_list(*polynomial, digits);
  j["residual"] = scalar_text(residual, 6);
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace aim::cli
