#ifndef BRANE_COMMANDS_HPP
#define BRANE_COMMANDS_HPP

// Subcommands of the brane tool. Each returns the process exit code:
// 0 pass, 1 verification failure, 2 input or usage error. Output is built in
// memory and written once, so nothing is written on exit 2.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "brane/brane.hpp"
#include "brane/io.hpp"

namespace brane::cli {

using io::Json;

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInput = 2;

/// Nijenhuis defects and |dF| at or below this count as zero.
inline constexpr double kIntegrabilityThreshold = 1e-6;
/// Acceptable mismatch in the Nijenhuis identity check.
inline constexpr double kIdentityTolerance = 1e-6;
inline constexpr int kIdentityPoints = 16;

struct Options {
  int grid = kDefaultGrid;
  double tol = kDefaultTol;
  double h = kDefaultStep;
  std::uint64_t seed = 0;
  int samples = 100;
  std::string out;
  SpaceName space = SpaceName::T4;
  bool timestamp = true;
  std::optional<double> theta;
  std::vector<double> ybar;
  std::optional<int> sweep;
};

namespace detail {

/// Uniform double in [lo, hi) from the top 53 bits, identical on every platform.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::mt19937_64 gen_;
};

inline std::string utcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

inline std::string finishReport(Json report, const Options& opt) {
  if (opt.timestamp) report["timestamp"] = utcTimestamp();
  return report.dump(2) + "\n";
}

/// Writes to --out (through a temporary file renamed into place) or to `out`.
inline bool emit(const std::string& text, const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.out.empty()) {
    out << text;
    return true;
  }
  const std::string tmp = opt.out + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      err << "error: cannot write " << opt.out << "\n";
      return false;
    }
    f << text;
    if (!f.flush()) {
      err << "error: cannot write " << opt.out << "\n";
      std::filesystem::remove(tmp);
      return false;
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, opt.out, ec);
  if (ec) {
    err << "error: cannot write " << opt.out << ": " << ec.message() << "\n";
    std::filesystem::remove(tmp, ec);
    return false;
  }
  return true;
}

inline Json matrixJson(const linalg::Matrix<double>& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols; ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

template <class T>
Json mapJson(const LinearMap4<T>& m) {
  Json rows = Json::array();
  for (const auto& r : m.m) {
    Json row = Json::array();
    for (const auto& x : r) row.push_back(to_double(x));
    rows.push_back(row);
  }
  return rows;
}

template <class T>
Json sbJson(const BraneReport<T>& r) {
  return Json{{"sb1_resid", to_double(r.sb1_resid)},         {"sb2_resid", to_double(r.sb2_resid)},
              {"sb3_resid", to_double(r.sb3_resid)},         {"i_square_resid", to_double(r.i_square_resid)},
              {"grid_used", r.grid_used},                    {"pass", r.pass}};
}

template <class T>
Json hsJson(const HSReport<T>& r) {
  return Json{{"hs1_min", to_double(r.hs1_min)}, {"hs2_resid", to_double(r.hs2_resid)},
              {"hs3_resid", to_double(r.hs3_resid)}, {"hs1", r.hs1},
              {"hs2", r.hs2},                        {"hs3", r.hs3},
              {"grid_used", r.grid_used},            {"pass", r.pass}};
}

template <class T>
Form2<T> convertForm(const Form2<double>& f) {
  Form2<T> out;
  for (std::size_t s = 0; s < 6; ++s) out.c[s] = from_double<T>(f.c[s]);
  return out;
}

template <class T>
Json classCoeffs(const CohClass<T>& c) {
  Json a = Json::array();
  for (const auto& x : c.c) a.push_back(to_double(x));
  return a;
}

inline Json vectorJson(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

inline Json formCoeffs(const Form2<double>& f) {
  Json c = Json::object();
  for (std::size_t s = 0; s < 6; ++s) c[io::slotKey(s)] = f.c[s];
  return c;
}

/// Symplectic class, base class and chart shared by quadric and metric.
struct QuadricSetup {
  SpacePtr<double> space;
  std::optional<QuadricSpec<double>> q;
  CohClass<double> base;
};

inline QuadricSetup loadQuadric(const io::InputFile& omegaFile, const io::InputFile& baseFile, const Options& opt) {
  QuadricSetup s;
  s.space = opt.space == SpaceName::T4 ? torusSpace<double>() : k3Space<double>();
  auto omega = io::cohomologyClass(omegaFile, s.space);
  s.base = io::cohomologyClass(baseFile, s.space);
  if (!(pair(omega, omega) > 0.0)) throw io::InputError(omegaFile.path + ": symplectic class must have positive square");
  s.q.emplace(omega);
  if (opt.space == SpaceName::T4) {
    const auto w = constantFormOfClass(omega);
    if (!verifySB(w, constantFormOfClass(s.base), opt.tol).pass)
      throw io::InputError(baseFile.path + ": base is not a brane for this symplectic form");
  } else if (!quadricContains(*s.q, s.base, opt.tol)) {
    throw io::InputError(baseFile.path + ": base class is not on the quadric");
  }
  return s;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const io::InputError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitInput;
}

inline std::string csvNumber(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

/// SB and HS checks on (omega, F). Constant inputs are checked in exact rational arithmetic.
inline int cmdVerify(const std::string& omegaPath, const std::string& formPath, const Options& opt,
                     std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto omegaFile = io::readInput(omegaPath);
    const auto formFile = io::readInput(formPath);
    const auto omega = io::constantForm(omegaFile);
    if (!formFile.isForm()) throw io::InputError(formPath + ": expected a form file");
    if (opt.grid < 1) throw io::InputError("--grid must be positive");

    Json report;
    report["version"] = io::kFormatVersion;
    report["command"] = "verify";
    report["inputs"] = Json{{"omega", omegaFile.raw}, {"form", formFile.raw}};
    bool sbPass = false, hsPass = false;
    if (formFile.field.isConstant()) {
      const auto w = detail::convertForm<Rational>(omega);
      const auto f = detail::convertForm<Rational>(formFile.field.constantPart());
      const Rational tol = from_double<Rational>(opt.tol);
      const auto sb = verifySB(w, f, tol);
      const auto hs = verifyHS(ComplexTrigForm2<Rational>{TrigPolyForm2<Rational>::constant(f),
                                                          TrigPolyForm2<Rational>::constant(w)},
                               1, tol);
      report["settings"] = Json{{"grid", opt.grid}, {"tol", opt.tol}, {"arithmetic", "rational"}};
      report["sb"] = detail::sbJson(sb);
      report["hs"] = detail::hsJson(hs);
      sbPass = sb.pass;
      hsPass = hs.pass;
    } else {
      const auto sb = verifySB(omega, formFile.field, opt.grid, opt.tol);
      const auto hs = verifyHS(ComplexTrigForm2<double>{formFile.field, TrigPolyForm2<double>::constant(omega)},
                               opt.grid, opt.tol);
      report["settings"] = Json{{"grid", opt.grid}, {"tol", opt.tol}, {"arithmetic", "double"}};
      report["sb"] = detail::sbJson(sb);
      report["hs"] = detail::hsJson(hs);
      sbPass = sb.pass;
      hsPass = hs.pass;
    }
    report["sb_hs_agree"] = sbPass == hsPass;
    report["pass"] = sbPass && hsPass;
    if (!detail::emit(detail::finishReport(report, opt), opt, out, err)) return kExitInput;
    return sbPass && hsPass ? kExitPass : kExitFail;
  });
}

/// Samples the quadric through the cylinder chart and reconstructs each sample.
inline int cmdQuadric(const std::string& omegaPath, const std::string& basePath, const Options& opt,
                      std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    if (opt.samples < 0) throw io::InputError("--samples must be non-negative");
    const auto omegaFile = io::readInput(omegaPath);
    const auto baseFile = io::readInput(basePath);
    auto setup = detail::loadQuadric(omegaFile, baseFile, opt);
    const auto& q = *setup.q;
    const auto chart = buildChart(q, setup.base, opt.tol);

    detail::SampleStream rng(opt.seed);
    Json samples = Json::array();
    bool allPass = true;
    for (int n = 0; n < opt.samples; ++n) {
      const double theta = rng.uniform(0.0, kTwoPi);
      std::vector<double> ybar(chart.fiberDim());
      for (auto& y : ybar) y = rng.uniform(-1.0, 1.0);
      const auto c = phi(chart, theta, ybar);
      Json row{{"theta", theta}, {"ybar", detail::vectorJson(ybar)}, {"class", detail::classCoeffs(c)}};
      bool pass = false;
      if (opt.space == SpaceName::T4) {
        try {
          const auto rb = reconstructBrane(q, c, opt.tol);
          row["form"] = detail::formCoeffs(rb.form);
          pass = rb.report.pass;
        } catch (const Error&) {
          row["form"] = nullptr;
        }
      } else {
        pass = quadricContains(q, c, opt.tol);
      }
      row["pass"] = pass;
      allPass = allPass && pass;
      samples.push_back(std::move(row));
    }

    Json report;
    report["version"] = io::kFormatVersion;
    report["command"] = "quadric";
    report["inputs"] = Json{{"omega", omegaFile.raw}, {"base", baseFile.raw}};
    report["settings"] = Json{{"space", std::string(to_string(opt.space))},
                              {"samples", opt.samples},
                              {"seed", opt.seed},
                              {"tol", opt.tol}};
    report["chart"] = Json{{"b", detail::classCoeffs(chart.b)}, {"fiber_dim", chart.fiberDim()}};
    report["samples"] = std::move(samples);
    report["pass"] = allPass;
    if (!detail::emit(detail::finishReport(report, opt), opt, out, err)) return kExitInput;
    return allPass ? kExitPass : kExitFail;
  });
}

/// CSV of metric samples on the quadric, one row per (theta, ybar).
inline int cmdMetric(const std::string& omegaPath, const std::string& basePath, const Options& opt,
                     std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto omegaFile = io::readInput(omegaPath);
    const auto baseFile = io::readInput(basePath);
    auto setup = detail::loadQuadric(omegaFile, baseFile, opt);
    const auto chart = buildChart(*setup.q, setup.base, opt.tol);
    const std::size_t m = chart.fiberDim();

    std::vector<std::pair<double, std::vector<double>>> points;
    if (opt.sweep) {
      if (*opt.sweep < 0) throw io::InputError("--sweep must be non-negative");
      if (opt.theta || !opt.ybar.empty()) throw io::InputError("--sweep excludes --theta and --ybar");
      detail::SampleStream rng(opt.seed);
      for (int n = 0; n < *opt.sweep; ++n) {
        const double theta = rng.uniform(0.0, kTwoPi);
        std::vector<double> ybar(m);
        for (auto& y : ybar) y = rng.uniform(-1.0, 1.0);
        points.emplace_back(theta, std::move(ybar));
      }
    } else {
      std::vector<double> ybar = opt.ybar.empty() ? std::vector<double>(m, 0.0) : opt.ybar;
      if (ybar.size() != m)
        throw io::InputError("--ybar needs " + std::to_string(m) + " values for this space");
      points.emplace_back(opt.theta.value_or(0.0), std::move(ybar));
    }

    std::ostringstream csv;
    csv << "theta";
    for (std::size_t i = 1; i <= m; ++i) csv << ",y" << i;
    for (std::size_t i = 0; i <= m; ++i)
      for (std::size_t j = i; j <= m; ++j) csv << ",g_" << i << "_" << j;
    csv << ",sig_pos,sig_neg,sig_zero,offdiag_max,gamma_resid,rho_pushforward,rho_closed_form,rho_sqrt_form,"
           "rho_ratio\n";
    bool allLorentzian = true;
    for (const auto& [theta, ybar] : points) {
      const auto s = metricAt(chart, theta, ybar);
      csv << detail::csvNumber(theta);
      for (double y : ybar) csv << "," << detail::csvNumber(y);
      for (std::size_t i = 0; i <= m; ++i)
        for (std::size_t j = i; j <= m; ++j) csv << "," << detail::csvNumber(s.g(i, j));
      csv << "," << s.signature.pos << "," << s.signature.neg << "," << s.signature.zero << ","
          << detail::csvNumber(s.offDiagonalMax) << "," << detail::csvNumber(s.gammaClosedFormResid) << ","
          << detail::csvNumber(s.rhoPushforward) << "," << detail::csvNumber(s.rhoClosedForm) << ","
          << detail::csvNumber(s.rhoSqrtForm) << "," << detail::csvNumber(s.rhoPushforward / s.rhoSqrtForm)
          << "\n";
      allLorentzian = allLorentzian && s.signature == linalg::Inertia{1, m, 0};
    }
    if (!detail::emit(csv.str(), opt, out, err)) return kExitInput;
    return allLorentzian ? kExitPass : kExitFail;
  });
}

/// Nijenhuis defect against dF on the grid, plus the identity linking them.
inline int cmdNijenhuis(const std::string& omegaPath, const std::string& formPath, const Options& opt,
                        std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const auto omegaFile = io::readInput(omegaPath);
    const auto formFile = io::readInput(formPath);
    const auto omega = io::constantForm(omegaFile);
    if (!formFile.isForm()) throw io::InputError(formPath + ": expected a form file");
    if (opt.grid < 1) throw io::InputError("--grid must be positive");
    if (!(opt.h > 0.0)) throw io::InputError("--h must be positive");
    const auto& f = formFile.field;

    const auto rep = nijenhuisDefect(omega, f, opt.grid, opt.h, opt.tol);
    detail::SampleStream rng(opt.seed);
    double resid = 0.0, residHalf = 0.0, lhs = 0.0;
    for (int n = 0; n < kIdentityPoints; ++n) {
      Point x{};
      for (auto& v : x) v = rng.uniform(0.0, kTwoPi);
      const auto a = lemmaInteIdentity(omega, f, x, opt.h, opt.tol);
      const auto b = lemmaInteIdentity(omega, f, x, opt.h / 2, opt.tol);
      resid = std::max(resid, a.residual);
      residHalf = std::max(residHalf, b.residual);
      lhs = std::max(lhs, a.lhsNorm);
    }
    const bool integrable = rep.maxDefect <= kIntegrabilityThreshold;
    const bool closed = rep.maxdF <= kIntegrabilityThreshold;
    const bool consistent = integrable == closed;
    const bool identityOk = resid <= kIdentityTolerance;

    Json report;
    report["version"] = io::kFormatVersion;
    report["command"] = "nijenhuis";
    report["inputs"] = Json{{"omega", omegaFile.raw}, {"form", formFile.raw}};
    report["settings"] = Json{{"grid", opt.grid},
                              {"h", opt.h},
                              {"tol", opt.tol},
                              {"seed", opt.seed},
                              {"zero_threshold", kIntegrabilityThreshold}};
    report["max_defect"] = rep.maxDefect;
    report["max_dF"] = rep.maxdF;
    report["grid_points"] = rep.gridPoints;
    report["identity"] = Json{{"points", kIdentityPoints},
                              {"residual", resid},
                              {"residual_half_step", residHalf},
                              {"ratio", residHalf > 0.0 ? Json(resid / residHalf) : Json(nullptr)},
                              {"lhs_norm", lhs},
                              {"pass", identityOk}};
    report["integrable"] = integrable;
    report["closed"] = closed;
    report["consistent"] = consistent;
    report["pass"] = consistent && identityOk;
    if (!detail::emit(detail::finishReport(report, opt), opt, out, err)) return kExitInput;
    return consistent && identityOk ? kExitPass : kExitFail;
  });
}

/// The standard torus example end to end, with the two known closed-form discrepancies.
inline int cmdExampleTorus(const Options& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    using Q = Rational;
    const Form2<Q> omega0 = Form2<Q>::e(1, 4) + Form2<Q>::e(2, 3);
    const Form2<Q> f0 = Form2<Q>::e(1, 3) - Form2<Q>::e(2, 4);
    const Form2<Q> kappa = Form2<Q>::e(1, 2) + Form2<Q>::e(3, 4);

    const auto sb = verifySB(omega0, f0, Q(0));
    const auto hs = verifyHS(ComplexTrigForm2<Q>{TrigPolyForm2<Q>::constant(f0), TrigPolyForm2<Q>::constant(omega0)},
                             1, Q(0));
    const auto i = composeI(omega0, f0);
    LinearMap4<Q> jj;
    jj.m[0][1] = Q(-1);
    jj.m[1][0] = Q(1);
    jj.m[2][3] = Q(-1);
    jj.m[3][2] = Q(1);
    const bool iIsJJ = i == jj;
    const bool iSquare = isAlmostComplex(i, Q(0));

    auto t4 = torusSpace<Q>();
    auto k3 = k3Space<Q>();
    const auto wClass = classOfConstantForm(omega0, t4);
    const auto fClass = classOfConstantForm(f0, t4);
    const auto kClass = classOfConstantForm(kappa, t4);
    const auto sigT4 = signature(*t4);
    const auto sigK3 = signature(*k3);

    const auto alpha = kClass - fClass;
    const auto ex = torusExampleResiduals(alpha.c[0], alpha.c[1], alpha.c[2], alpha.c[3], alpha.c[4], alpha.c[5]);
    const auto nf = affineNormalForm(torusDeformationQuadric());
    const auto sOmega = uniqueScalarWithImaginaryPart(fClass, wClass, wClass);
    const auto sF = uniqueScalarWithImaginaryPart(fClass, wClass, fClass);
    const auto rk = reconstructBrane(QuadricSpec<Q>(wClass), kClass);

    QuadricSpec<double> qd(classOfConstantForm(Form2<double>::e(1, 4) + Form2<double>::e(2, 3)));
    const auto chart = buildChart(qd, classOfConstantForm(Form2<double>::e(1, 3) - Form2<double>::e(2, 4)));
    const auto ms = metricAt(chart, 0.0, {1.0, 0.0, 0.0});

    const bool normalOk = nf.normalSquares == std::vector<int>{1, 1, -1, -1, -1};
    const bool scalarsOk = sOmega.a == Q(1) && sOmega.b == Q(0) && sF.a == Q(0) && sF.b == Q(1);
    const bool pass = sb.pass && hs.pass && iIsJJ && iSquare && sigT4 == linalg::Inertia{3, 3, 0} &&
                      sigK3 == linalg::Inertia{3, 19, 0} && ex.r_h == Q(0) && ex.r_q == Q(0) && normalOk &&
                      scalarsOk && rk.report.pass;

    Json report;
    report["version"] = io::kFormatVersion;
    report["command"] = "example-torus";
    report["forms"] = Json{{"omega0", io::formJson(omega0)}, {"F0", io::formJson(f0)}, {"kappa", io::formJson(kappa)}};
    report["verify"] = Json{{"arithmetic", "rational"}, {"sb", detail::sbJson(sb)}, {"hs", detail::hsJson(hs)}};
    report["complex_structure"] = Json{{"I", detail::mapJson(i)}, {"equals_J_plus_J", iIsJJ}, {"squares_to_minus_id", iSquare}};
    report["classes"] = Json{{"omega0", detail::classCoeffs(wClass)},
                             {"F0", detail::classCoeffs(fClass)},
                             {"kappa", detail::classCoeffs(kClass)},
                             {"omega0_square", to_double(pair(wClass, wClass))},
                             {"F0_square", to_double(pair(fClass, fClass))},
                             {"F0_dot_omega0", to_double(pair(fClass, wClass))}};
    report["signatures"] = Json{{"t4", {sigT4.pos, sigT4.neg}}, {"k3", {sigK3.pos, sigK3.neg}}};
    report["deformation"] = Json{{"alpha", detail::classCoeffs(alpha)},
                                 {"r_h", to_double(ex.r_h)},
                                 {"r_q", to_double(ex.r_q)},
                                 {"normal_form_squares", nf.normalSquares},
                                 {"reconstructed_kappa", io::formJson(rk.form)},
                                 {"reconstruction_pass", rk.report.pass}};
    report["unique_scalar"] = Json{{"target_omega0", {to_double(sOmega.a), to_double(sOmega.b)}},
                                   {"target_F0", {to_double(sF.a), to_double(sF.b)}}};
    report["metric"] = Json{{"theta", ms.theta}, {"ybar", detail::vectorJson(ms.ybar)}, {"g", detail::matrixJson(ms.g)},
                            {"signature", {ms.signature.pos, ms.signature.neg}}};
    report["discrepancies"] = Json::array(
        {Json{{"id", "metric-theta-theta"},
              {"note", "g_theta_theta from the pushforward is (1+r^2) w^2; the closed form sqrt(1+r^2) w^2 differs off r = 0"},
              {"pushforward", ms.rhoPushforward},
              {"sqrt_form", ms.rhoSqrtForm},
              {"ratio", ms.rhoPushforward / ms.rhoSqrtForm}},
         Json{{"id", "torus-deformation-quadric"},
              {"note", "wedge-derived equation (g1+g2) + f1 f2 + g1 g2 + h1 h2 = 0 accepts alpha = [kappa] - [F0]; "
                       "the form -2(g1 g2 + f1 f2 + h1 h2) + (g1+g2) does not"},
              {"wedge_derived", to_double(ex.r_q)},
              {"alternative", to_double(ex.alternative)}}});
    report["pass"] = pass;
    if (!detail::emit(detail::finishReport(report, opt), opt, out, err)) return kExitInput;
    return pass ? kExitPass : kExitFail;
  });
}

}  // namespace brane::cli

#endif  // BRANE_COMMANDS_HPP
