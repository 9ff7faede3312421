#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cmv/cmvalue.hpp"
#include "cmv/gzoracle.hpp"
#include "cmv/locwhit.hpp"
#include "cmv/verify.hpp"

namespace cmv::cli {

namespace {

constexpr unsigned kDefaultPrecision = 64;

struct Emitter {
  std::ostream& out;
  bool machine;

  void kv(const std::string& key, const std::string& value, const std::string& label = "") const {
    if (machine)
      out << key << "=" << value << "\n";
    else
      out << (label.empty() ? key : label) << " = " << value << "\n";
  }
};

unsigned default_precision() {
  if (const char* env = std::getenv("CMV_PRECISION")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      throw CLI::ValidationError("CMV_PRECISION", "must be a positive integer");
    }
  }
  return kDefaultPrecision;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

FourierForm load_form_with(const std::string& form_path, const std::string& lattice_path) {
  if (lattice_path.empty()) return load_form(form_path);
  std::istringstream in(read_file(form_path));
  std::ostringstream text;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos && line.substr(0, eq).find("lattice") != std::string::npos) continue;
    text << line << "\n";
  }
  text << "lattice=" << std::filesystem::absolute(lattice_path).string() << "\n";
  return parse_form(text.str());
}

std::string join_primes(const std::vector<Prime>& ps) {
  std::string s;
  for (auto p : ps) s += (s.empty() ? "" : ",") + std::to_string(p);
  return s.empty() ? "none" : s;
}

std::string power_string(const std::vector<std::pair<BigInt, int>>& f) {
  std::string s;
  for (auto& [p, e] : f) s += (s.empty() ? "" : " * ") + p.str() + "^" + std::to_string(e);
  return s.empty() ? "1" : s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact CM values of Borcherds forms"};
  app.require_subcommand(1);
  bool machine = false;
  unsigned prec = 0;
  app.add_flag("--machine", machine, "line-oriented key=value output");
  app.add_option("--prec", prec, "decimal digits (default $CMV_PRECISION or 64)")->check(CLI::Range(10u, 100000u));

  // field info
  auto* field_cmd = app.add_subcommand("field", "imaginary quadratic field data");
  field_cmd->require_subcommand(1);
  auto* field_info = field_cmd->add_subcommand("info", "class number, ramification, L(1), k0");
  std::int64_t field_d = 0;
  field_info->add_option("-d", field_d, "field Q(sqrt(-d))")->required();
  field_info->add_option("--prec", prec, "decimal digits")->check(CLI::Range(10u, 100000u));

  // kappa
  auto* kappa_cmd = app.add_subcommand("kappa", "kappa(t, mu, a)");
  std::int64_t kd = 0;
  std::string ideal = "unit", t_text;
  int mu = 0;
  kappa_cmd->add_option("-d", kd, "field Q(sqrt(-d))")->required();
  kappa_cmd->add_option("--ideal", ideal, "unit | prime:p | basis:x1,y1,x2,y2");
  kappa_cmd->add_option("--mu", mu, "dual coset label");
  kappa_cmd->add_option("-t", t_text, "rational a/b")->required();
  kappa_cmd->add_option("--prec", prec, "decimal digits")->check(CLI::Range(10u, 100000u));

  // whittaker
  auto* whit_cmd = app.add_subcommand("whittaker", "local Whittaker polynomials and their assembly");
  whit_cmd->add_option("-d", kd, "field Q(sqrt(-d))")->required();
  whit_cmd->add_option("--ideal", ideal, "unit | prime:p | basis:x1,y1,x2,y2");
  whit_cmd->add_option("--mu", mu, "dual coset label");
  whit_cmd->add_option("-t", t_text, "rational a/b")->required();

  // form validate | mmax
  auto* form_cmd = app.add_subcommand("form", "coefficient tables");
  form_cmd->require_subcommand(1);
  std::string form_path;
  auto* form_validate = form_cmd->add_subcommand("validate", "check integrality, congruence, finiteness");
  form_validate->add_option("file", form_path)->required();
  auto* form_mmax = form_cmd->add_subcommand("mmax", "largest pole order");
  form_mmax->add_option("file", form_path)->required();

  // qexp
  auto* qexp_cmd = app.add_subcommand("qexp", "exact q-expansions");
  std::string qname;
  std::size_t qterms = 10;
  qexp_cmd->add_option("name", qname, "delta | e4 | e6 | j")->required()->check(CLI::IsMember({"delta", "e4", "e6", "j"}));
  qexp_cmd->add_option("-N", qterms, "number of terms")->check(CLI::Range(std::size_t{1}, std::size_t{100000}));

  // cmsum / factor
  std::string lattice_path, vol_text;
  auto* cmsum_cmd = app.add_subcommand("cmsum", "CM value report");
  cmsum_cmd->add_option("--form", form_path)->required();
  cmsum_cmd->add_option("--lattice", lattice_path, "lattice file overriding the form header");
  cmsum_cmd->add_option("--vol-kt", vol_text, "vol(K_T) as a/b (default 2/h)");
  cmsum_cmd->add_option("--prec", prec, "decimal digits")->check(CLI::Range(10u, 100000u));
  auto* factor_cmd = app.add_subcommand("factor", "rational part as a factored rational");
  factor_cmd->add_option("--form", form_path)->required();
  factor_cmd->add_option("--lattice", lattice_path, "lattice file overriding the form header");
  factor_cmd->add_option("--vol-kt", vol_text, "vol(K_T) as a/b (default 2/h)");

  // gz
  auto* gz_cmd = app.add_subcommand("gz", "product of singular moduli differences");
  std::int64_t d1 = 0, d2 = 0;
  gz_cmd->add_option("--d1", d1)->required();
  gz_cmd->add_option("--d2", d2)->required();
  gz_cmd->add_option("--prec", prec, "decimal digits")->check(CLI::Range(30u, 100000u));

  // selftest
  auto* self_cmd = app.add_subcommand("selftest", "run the acceptance checks");
  std::vector<std::string> criteria;
  self_cmd->add_option("-c,--criterion", criteria, "criterion id (repeatable)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
    if (prec == 0) prec = default_precision();
    if (prec < 10) throw CLI::ValidationError("--prec", "precision must be at least 10");
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  const Emitter em{out, machine};
  try {
    if (field_info->parsed()) {
      const QuadField f = QuadField::make(field_d);
      ScopedPrecision scope(prec + kGuardDigits);
      em.kv("d", std::to_string(f.d()));
      em.kv("discriminant", std::to_string(f.discriminant()));
      em.kv("h", std::to_string(f.class_number()));
      em.kv("w", std::to_string(f.roots_of_unity()));
      em.kv("ramified", join_primes(f.ramified_primes()), "ramified primes");
      em.kv("L1", format_real(L_at_one(f, prec), prec), "L(1)");
      em.kv("log_deriv_L0", format_real(chowla_selberg_log_deriv(f, prec), prec), "L'(0)/L(0)");
      const auto k0 = kappa_zero_constant(f, prec);
      em.kv("k0", format_real(k0.value, prec), "kappa(0,0) = " + k0.tag);
      return 0;
    }
    if (kappa_cmd->parsed()) {
      const QuadField f = QuadField::make(kd);
      const IdealLattice lat = IdealLattice::make(f, ideal);
      const DualCoset& c = lat.coset(mu);
      const KappaValue k = kappa_at(lat, c, parse_rational(t_text));
      em.kv("kappa", k.to_string());
      em.kv("kappa_exact", k.serialize(), "exact");
      ScopedPrecision scope(prec + kGuardDigits);
      em.kv("numeric", format_real(k.numeric(prec), prec));
      return 0;
    }
    if (whit_cmd->parsed()) {
      const QuadField f = QuadField::make(kd);
      const IdealLattice lat = IdealLattice::make(f, ideal);
      const DualCoset& c = lat.coset(mu);
      const EisensteinCoeff e = eisenstein_deriv_coeff(lat, c, parse_rational(t_text));
      for (auto& lf : e.factors) {
        const std::string p = std::to_string(lf.poly.p);
        em.kv("W_" + p, lf.poly.to_string(), "W_" + p + "(X)");
        em.kv("W_" + p + "_value", format_rational(lf.at_zero.value), "W_" + p + "(0)");
        em.kv("W_" + p + "_deriv", lf.at_zero.derivative.to_log_string(), "W_" + p + "'(0)");
      }
      em.kv("kappa", e.kappa.to_log_string());
      em.kv("nonvanishing_flag", e.nonvanishing_value ? "1" : "0", "nonvanishing flag");
      return 0;
    }
    if (form_validate->parsed()) {
      const FourierForm F = load_form(form_path);
      em.kv("valid", "yes");
      em.kv("records", std::to_string(F.coeffs().size()));
      em.kv("principal_records", std::to_string(F.principal_part().size()), "principal records");
      em.kv("m_max", format_rational(m_max(F)));
      return 0;
    }
    if (form_mmax->parsed()) {
      em.kv("m_max", format_rational(m_max(load_form(form_path))));
      return 0;
    }
    if (qexp_cmd->parsed()) {
      em.kv(qname, classical_qexp(qname, qterms).to_string());
      return 0;
    }
    if (cmsum_cmd->parsed() || factor_cmd->parsed()) {
      const FourierForm F = load_form_with(form_path, lattice_path);
      std::optional<Rational> vol;
      if (!vol_text.empty()) vol = parse_rational(vol_text);
      const bool want_numeric = cmsum_cmd->parsed();
      const CMValueReport r = log_psi_product(F, vol, want_numeric ? prec : 0);
      const SupportCheck sc = check_prime_support(r, F);
      if (factor_cmd->parsed()) {
        if (r.kzero_coeff != 0) {
          err << "error: the product has a transcendental factor (c00 = " << format_rational(r.c00)
              << "); factor needs c00 = 0\n";
          return 1;
        }
        if (!r.rational_part.exponentiates_to_rational()) {
          err << "error: rational part has non-integral exponents: " << r.rational_part.serialize() << "\n";
          return 1;
        }
        em.kv("rat", r.rational_part.to_power_string());
        em.kv("log_rat", r.rational_part.serialize(), "log rat (exact)");
        return 0;
      }
      em.kv("d", std::to_string(r.d));
      em.kv("h", std::to_string(r.h));
      em.kv("degree", std::to_string(r.degree));
      if (machine) {
        em.kv("vol_KT", format_rational(r.vol_KT));
        em.kv("vol_KT_overridden", r.vol_overridden ? "yes" : "no");
      } else {
        em.kv("vol_KT", format_rational(r.vol_KT) + (r.vol_overridden ? " (override)" : " (default 2/h)"), "vol(K_T)");
      }
      em.kv("c00", format_rational(r.c00));
      em.kv("phi_sum", r.phi.sum.serialize(), "sum c(-m) kappa(m)");
      em.kv("phi_integral", r.phi.integral.to_string(), "Phi integral (2 * sum)");
      em.kv("phi_cycle_sum", r.phi.cycle_sum.to_string(), "Phi cycle sum (4/vol * sum)");
      em.kv("log_rat", r.rational_part.serialize(), "log rat (exact)");
      em.kv("log_rat_display", r.rational_part.to_log_string(), "log rat");
      em.kv("rat", r.rational_part.to_power_string());
      em.kv("transcendental_exponent", format_rational(r.transcendental_exponent),
            "transcendental exponent (base exp(-k0))");
      em.kv("kzero_coeff", format_rational(r.kzero_coeff), "coefficient of " + kzero_tag(r.d));
      em.kv("sign_definite", r.exponents_sign_definite ? "yes" : "no", "exponents sign-definite");
      em.kv("integrality_hypothesis", r.integrality_hypothesis ? "yes" : "no", "integrality hypothesis");
      const std::string support = sc.ok ? "OK" : "VIOLATED:" + join_primes(sc.violations);
      if (machine) {
        em.kv("support", support);
        em.kv("support_bound", format_rational(sc.bound));
      } else {
        em.kv("support", support + " (bound " + format_rational(sc.bound) + ")", "prime support");
      }
      if (r.numeric) {
        ScopedPrecision scope(prec + kGuardDigits);
        em.kv("numeric", format_real(*r.numeric, prec), "log prod ||Psi||^2");
      }
      if (r.base) {
        ScopedPrecision scope(prec + kGuardDigits);
        em.kv("base_direct", format_real(r.base->direct, prec), "base exp(-k0)");
        em.kv("base_series", format_real(r.base->series, prec), "base (d/4pi) e^-gamma e^(2L'(0)/L(0))");
        em.kv("base_gamma", format_real(r.base->gamma, prec), "base (4d pi)^-1 e^-gamma prod Gamma(a/d)^(w chi/h)");
        em.kv("bases_agree", r.base->agree ? "yes" : "no", "bases agree");
      }
      return 0;
    }
    if (gz_cmd->parsed()) {
      const GZResult r = gz_product(d1, d2, prec);
      const GZSupport s = gz_support_check(r);
      std::string viol;
      for (auto& p : s.violations) viol += (viol.empty() ? "" : ",") + p.str();
      if (machine) {
        em.kv("product", r.product.str());
        em.kv("factorization", power_string(r.factorization));
        em.kv("support", s.ok ? "OK" : "VIOLATED:" + viol);
        em.kv("precision_used", std::to_string(r.precision_used));
        em.kv("log10_margin", std::to_string(r.log10_margin));
      } else {
        out << "product = " << r.product << " = " << (r.product < 0 ? "-" : "") << power_string(r.factorization)
            << "; support: " << (s.ok ? "OK" : "VIOLATED (" + viol + ")") << "\n";
      }
      return 0;
    }
    if (self_cmd->parsed()) {
      if (criteria.empty()) criteria = verify::criterion_ids();
      int failures = 0;
      for (auto& id : criteria) {
        const verify::CriterionResult r = verify::run_criterion(id);
        out << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << ":" << r.detail << "\n";
        if (!r.pass) ++failures;
      }
      return failures == 0 ? 0 : 1;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace cmv::cli
