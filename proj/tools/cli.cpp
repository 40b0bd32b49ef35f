#include "cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "quadgap/lattice.hpp"

#ifndef QUADGAP_VERSION
#define QUADGAP_VERSION "0.0.0"
#endif

namespace quadgap::cli {

namespace {

using io::Json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// What a subcommand produced, before rendering.
struct Outcome {
  int code = kSuccess;
  Json json;
  std::vector<std::string> columns;            // CSV table, if any
  std::vector<std::vector<std::string>> rows;
};

Rational rational_arg(const std::string& text, const char* name) {
  try {
    return parse_rational(text);
  } catch (const Error&) {
    throw UsageError(std::string("--") + name + ": not a rational: '" + text + "'");
  }
}

BigInt integer_arg(const std::string& text, const char* name) {
  std::string_view body(text);
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (body.empty() || body.find_first_not_of("0123456789") != std::string_view::npos)
    throw UsageError(std::string("--") + name + ": not an integer: '" + text + "'");
  BigInt v(std::string(body), 10);
  return text.front() == '-' ? BigInt(-v) : v;
}

std::string approx_string(double v) {
  if (!std::isfinite(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

Json approx_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

template <std::size_t Dim>
Json points_json(const std::vector<lattice::LatticePoint<Dim>>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back(p.x);
  return out;
}

template <std::size_t Dim>
void point_rows(Outcome& o, const std::vector<lattice::LatticePoint<Dim>>& pts) {
  for (std::size_t a = 0; a < Dim; ++a) o.columns.push_back("x" + std::to_string(a + 1));
  o.columns.push_back("norm2");
  for (const auto& p : pts) {
    std::vector<std::string> row;
    for (auto v : p.x) row.push_back(std::to_string(v));
    row.push_back(std::to_string(p.norm2()));
    o.rows.push_back(std::move(row));
  }
}

Json optional_int(const std::optional<std::int64_t>& v) { return v ? Json(*v) : Json(nullptr); }

Json header() { return Json{{"version", io::kSchemaVersion}}; }

// --- CSV fallback: top-level scalars as key,value --------------------------------

void flatten(const Json& j, const std::string& prefix, std::vector<std::vector<std::string>>& rows) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, name, rows);
    } else if (value.is_string()) {
      rows.push_back({name, value.get<std::string>()});
    } else if (value.is_primitive()) {
      rows.push_back({name, value.dump()});
    }
  }
}

std::string render_csv(const Outcome& o) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  if (!o.columns.empty()) {
    line(o.columns);
    for (const auto& r : o.rows) line(r);
  } else {
    std::vector<std::vector<std::string>> rows;
    flatten(o.json, "", rows);
    line({"key", "value"});
    for (const auto& r : rows) line(r);
  }
  return os.str();
}

// --- subcommands ------------------------------------------------------------------

struct Globals {
  std::string format = "json";
  unsigned threads = 1;
  std::string out_path;
  std::string manifest_path;
};

using Handler = std::function<Outcome()>;

void add_primes(CLI::App& app, Handler& h, const Globals& g) {
  auto* sub = app.add_subcommand("primes", "Primes up to a limit (segmented sieve)");
  auto limit = std::make_shared<std::uint64_t>();
  auto count_only = std::make_shared<bool>(false);
  sub->add_option("--limit", *limit, "Upper bound")->required();
  sub->add_flag("--count-only", *count_only, "Report only the count");
  sub->callback([&h, &g, limit, count_only] {
    h = [&g, limit, count_only] {
      const auto primes = arith::sieve_primes(*limit, g.threads);
      Outcome o;
      o.json = header();
      o.json["limit"] = *limit;
      o.json["count"] = primes.size();
      if (!*count_only) {
        o.json["primes"] = primes;
        o.columns = {"p"};
        for (auto p : primes) o.rows.push_back({std::to_string(p)});
      }
      return o;
    };
  });
}

void add_symbol(CLI::App& app, Handler& h) {
  auto* sub = app.add_subcommand("symbol", "Kronecker or Legendre symbol (d/n)");
  auto d = std::make_shared<std::string>(), n = std::make_shared<std::string>();
  auto kind = std::make_shared<std::string>("kronecker");
  sub->add_option("--d", *d, "Top argument (a discriminant for Kronecker)")->required();
  sub->add_option("--n", *n, "Bottom argument (an odd prime for Legendre)")->required();
  sub->add_option("--kind", *kind, "kronecker or legendre")
      ->check(CLI::IsMember({"kronecker", "legendre"}))
      ->capture_default_str();
  sub->callback([&h, d, n, kind] {
    h = [d, n, kind] {
      const BigInt dv = integer_arg(*d, "d"), nv = integer_arg(*n, "n");
      const auto value = *kind == "legendre" ? arith::legendre_symbol(dv, nv) : arith::kronecker_symbol(dv, nv);
      Outcome o;
      o.json = header();
      o.json["kind"] = *kind;
      o.json["d"] = dv.get_str();
      o.json["n"] = nv.get_str();
      o.json["value"] = arith::to_int(value);
      return o;
    };
  });
}

void add_sieve2sq(CLI::App& app, Handler& h, const Globals& g) {
  auto* sub = app.add_subcommand("sieve2sq", "Sums of two squares up to a limit");
  auto limit = std::make_shared<std::uint64_t>();
  auto list = std::make_shared<bool>(false);
  sub->add_option("--limit", *limit, "Upper bound")->required();
  sub->add_flag("--list", *list, "List every member");
  sub->callback([&h, &g, limit, list] {
    h = [&g, limit, list] {
      const auto sieve = lattice::two_squares_sieve(*limit, g.threads);
      Outcome o;
      o.json = header();
      o.json["limit"] = *limit;
      o.json["count"] = sieve.count();
      if (*list) {
        Json members = Json::array();
        o.columns = {"n"};
        for (std::uint64_t n = 0; n <= *limit; ++n) {
          if (!sieve.contains(n)) continue;
          members.push_back(n);
          o.rows.push_back({std::to_string(n)});
        }
        o.json["members"] = std::move(members);
      }
      return o;
    };
  });
}

void add_gaps2sq(CLI::App& app, Handler& h, const Globals& g) {
  auto* sub = app.add_subcommand("gaps2sq", "Record gaps between sums of two squares");
  auto limit = std::make_shared<std::uint64_t>();
  sub->add_option("--limit", *limit, "Upper bound")->required();
  sub->callback([&h, &g, limit] {
    h = [&g, limit] {
      Outcome o;
      o.json = header();
      o.json["limit"] = *limit;
      Json records = Json::array();
      o.columns = {"s_n", "s_next", "gap", "ratio"};
      for (const auto& r : lattice::gap_scan_2sq(*limit, g.threads)) {
        records.push_back({{"s_n", r.s_n}, {"s_next", r.s_next}, {"gap", r.gap},
                           {"approx", {{"ratio", approx_number(r.ratio)}}}});
        o.rows.push_back({std::to_string(r.s_n), std::to_string(r.s_next), std::to_string(r.gap),
                          approx_string(r.ratio)});
      }
      o.json["records"] = std::move(records);
      return o;
    };
  });
}

void add_bambah_chowla(CLI::App& app, Handler& h, const Globals& g) {
  auto* sub = app.add_subcommand("bambah-chowla", "Smallest k whose window [k, k + beta k^(1/4)) has no sum of two squares");
  auto limit = std::make_shared<std::uint64_t>();
  auto from = std::make_shared<std::uint64_t>(2);
  auto beta = std::make_shared<std::string>();
  sub->add_option("--limit", *limit, "Largest k")->required();
  sub->add_option("--beta", *beta, "Window constant, rational")->required();
  sub->add_option("--from", *from, "Smallest k")->capture_default_str();
  sub->callback([&h, &g, limit, from, beta] {
    h = [&g, limit, from, beta] {
      const Rational b = rational_arg(*beta, "beta");
      const auto failure = lattice::bambah_chowla_check(*limit, b, *from, g.threads);
      Outcome o;
      o.json = header();
      o.json["limit"] = *limit;
      o.json["from"] = std::max<std::uint64_t>(*from, 2);
      o.json["beta"] = io::rational_string(b);
      o.json["failure"] = failure ? Json(*failure) : Json(nullptr);
      o.json["holds"] = !failure.has_value();
      return o;
    };
  });
}

void add_gaps3sq(CLI::App& app, Handler& h) {
  auto* sub = app.add_subcommand("gaps3sq", "Gaps between consecutive sums of three squares");
  auto limit = std::make_shared<std::uint64_t>();
  sub->add_option("--limit", *limit, "Upper bound")->required();
  sub->callback([&h, limit] {
    h = [limit] {
      const auto report = lattice::three_squares_gap_check(*limit);
      Outcome o;
      o.json = header();
      o.json["limit"] = *limit;
      o.json["max_gap"] = report.max_gap;
      Json witnesses = Json::array();
      o.columns = {"gap", "s_n", "s_next"};
      for (const auto& [gap, pair] : report.witnesses) {
        witnesses.push_back({{"gap", gap}, {"s_n", pair.first}, {"s_next", pair.second}});
        o.rows.push_back({std::to_string(gap), std::to_string(pair.first), std::to_string(pair.second)});
      }
      o.json["witnesses"] = std::move(witnesses);
      return o;
    };
  });
}

void witness_rows(Outcome& o, const gapforge::WitnessTable& table) {
  o.columns = {"j", "d", "p", "valuation_r_plus_dj", "valuation_m_plus_j"};
  for (const auto& w : table) {
    o.rows.push_back({std::to_string(w.j), std::to_string(w.d), std::to_string(w.p),
                      std::to_string(w.valuation_r_plus_dj), std::to_string(w.valuation_m_plus_j)});
  }
}

void add_construct_gap(CLI::App& app, Handler& h, const Globals& g, std::ostream& err) {
  auto* sub = app.add_subcommand("construct-gap", "Certified interval [m, m+h] missed by every discriminant in D");
  auto D = std::make_shared<std::vector<std::int64_t>>();
  auto len = std::make_shared<std::int64_t>();
  auto verify = std::make_shared<bool>(false);
  auto max_A = std::make_shared<std::int64_t>(gapforge::ConstructOptions{}.max_A);
  sub->add_option("--D", *D, "Discriminants, comma separated or repeated")->required()->delimiter(',');
  sub->add_option("--h", *len, "Interval length")->required();
  sub->add_option("--max-A", *max_A, "Refuse when A exceeds this")->capture_default_str();
  sub->add_flag("--verify", *verify, "Verify the certificate before printing it");
  sub->callback([&h, &g, &err, D, len, verify, max_A] {
    h = [&g, &err, D, len, verify, max_A] {
      const auto cert = gapforge::construct_gap(gapforge::validate_D(*D), *len, {g.threads, *max_A});
      if (*verify) {
        const auto table = gapforge::verify_certificate(cert, g.threads);
        err << "verified: " << table.size() << " cells\n";
      }
      Outcome o;
      o.json = io::to_json(cert);
      return o;
    };
  });
}

void add_verify_gap(CLI::App& app, Handler& h, const Globals& g) {
  auto* sub = app.add_subcommand("verify-gap", "Verify a certificate file");
  auto path = std::make_shared<std::string>();
  auto oracle = std::make_shared<bool>(false);
  sub->add_option("--cert", *path, "Certificate JSON file")->required();
  sub->add_flag("--oracle", *oracle, "Also check every integer in [m, m+h] directly (D = {-4} only)");
  sub->callback([&h, &g, path, oracle] {
    h = [&g, path, oracle] {
      std::ifstream in(*path);
      if (!in) throw UsageError("cannot open certificate file '" + *path + "'");
      Json doc;
      try {
        doc = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw Error(Errc::invalid_argument, std::string("certificate is not valid JSON: ") + e.what());
      }
      const auto cert = io::certificate_from_json(doc);
      Outcome o;
      o.json = header();
      try {
        const auto table = gapforge::verify_certificate(cert, g.threads);
        o.json["valid"] = true;
        o.json["cells"] = table.size();
        o.json["witnesses"] = io::to_json(table);
        witness_rows(o, table);
      } catch (const VerificationError& e) {
        o.code = kDomainFailure;
        o.json["valid"] = false;
        o.json["error"] = e.what();
        if (e.cell()) o.json["cell"] = {{"j", e.cell()->j}, {"d", e.cell()->d}};
        return o;
      }
      if (*oracle) {
        const bool free = gapforge::verify_interval_free_oracle(cert.D, cert.m, cert.h);
        o.json["oracle"] = free;
        if (!free) o.code = kDomainFailure;
      }
      return o;
    };
  });
}

void add_annulus_enum(CLI::App& app, Handler& h) {
  auto* sub = app.add_subcommand("annulus-enum", "Lattice points with lambda <= |x|^2 <= lambda + kappa");
  auto lambda = std::make_shared<std::string>(), kappa = std::make_shared<std::string>();
  auto budget = std::make_shared<std::uint64_t>(lattice::EnumerationBudget{}.max_iterations);
  sub->add_option("--lambda", *lambda, "Inner squared radius, rational")->required();
  sub->add_option("--kappa", *kappa, "Thickness, rational")->required();
  sub->add_option("--budget", *budget, "Iteration budget")->capture_default_str();
  sub->callback([&h, lambda, kappa, budget] {
    h = [lambda, kappa, budget] {
      const lattice::Annulus a{rational_arg(*lambda, "lambda"), rational_arg(*kappa, "kappa")};
      const auto pts = lattice::enumerate_annulus_points(a, {*budget});
      Outcome o;
      o.json = header();
      o.json["lambda"] = io::rational_string(a.lambda);
      o.json["kappa"] = io::rational_string(a.kappa);
      o.json["count"] = pts.size();
      o.json["min_distance2"] = optional_int(lattice::min_pairwise_distance2<2>(pts));
      o.json["points"] = points_json(pts);
      point_rows(o, pts);
      return o;
    };
  });
}

void add_shell_enum(CLI::App& app, Handler& h) {
  auto* sub = app.add_subcommand("shell-enum", "Lattice points with m <= |x|^2 <= m + h");
  auto m = std::make_shared<std::string>(), len = std::make_shared<std::string>();
  auto budget = std::make_shared<std::uint64_t>(lattice::EnumerationBudget{}.max_iterations);
  sub->add_option("--m", *m, "Inner squared radius, rational")->required();
  sub->add_option("--h", *len, "Thickness, rational")->required();
  sub->add_option("--budget", *budget, "Iteration budget")->capture_default_str();
  sub->callback([&h, m, len, budget] {
    h = [m, len, budget] {
      const lattice::SphericalShell s{rational_arg(*m, "m"), rational_arg(*len, "h")};
      const auto pts = lattice::enumerate_shell_points(s, {*budget});
      Outcome o;
      o.json = header();
      o.json["m"] = io::rational_string(s.m);
      o.json["h"] = io::rational_string(s.h);
      o.json["count"] = pts.size();
      o.json["min_distance2"] = optional_int(lattice::min_pairwise_distance2<3>(pts));
      o.json["points"] = points_json(pts);
      point_rows(o, pts);
      return o;
    };
  });
}

Json search_json(const lattice::SparseSearchReport& r, const lattice::SparseAnnulusParams& p) {
  Json j = header();
  j["C"] = io::rational_string(p.C);
  j["s"] = io::rational_string(p.s);
  j["d"] = p.d;
  j["mu"] = io::rational_string(r.mu);
  j["found"] = r.found;
  j["J"] = r.J;
  j["kappa"] = r.kappa.expression();
  if (r.found) {
    j["m0"] = r.m0;
    j["lambda"] = io::rational_string(r.mu) + " + " + std::to_string(r.m0) + " * " + r.kappa.expression();
    j["closed_lower"] = r.closed_lower.get_str();
    j["closed_upper"] = r.closed_upper.get_str();
    j["min_distance2"] = optional_int(r.min_distance2);
    j["strip_empty"] = r.strip_empty;
    j["points"] = points_json(r.points);
  }
  Json buckets = Json::array();
  for (const auto& b : r.buckets) {
    buckets.push_back({{"index", b.index}, {"points", b.points}, {"min_distance2", optional_int(b.min_distance2)},
                       {"strip_points", b.strip_points}});
  }
  j["buckets"] = std::move(buckets);
  j["total_points"] = r.total_points;
  j["strip_union_points"] = r.strip_union_points;
  j["approx"] = {{"counting_bound", r.counting_bound},
                 {"counting_bound_holds", r.counting_bound_holds},
                 {"thickness", r.thickness},
                 {"half_C_mu_s", r.half_C_mu_s},
                 {"strip_width_max", r.strip_width_max},
                 {"kappa", r.kappa.approx()},
                 {"lambda", r.lambda_approx}};
  return j;
}

void add_annulus_search(CLI::App& app, Handler& h) {
  auto* sub = app.add_subcommand("annulus-search", "Find a d-sparse annulus among the first J+1 of thickness C mu^s");
  auto C = std::make_shared<std::string>(), s = std::make_shared<std::string>(), mu = std::make_shared<std::string>();
  auto d = std::make_shared<std::int64_t>(1);
  auto mu_to = std::make_shared<std::uint64_t>(0);
  auto budget = std::make_shared<std::uint64_t>(lattice::EnumerationBudget{}.max_iterations);
  sub->add_option("--C", *C, "Thickness constant, rational")->required();
  sub->add_option("--s", *s, "Exponent in (0, 1/4), rational")->required();
  sub->add_option("--d", *d, "Separation")->capture_default_str();
  sub->add_option("--mu", *mu, "Starting squared radius, rational")->required();
  sub->add_option("--mu-to", *mu_to, "Scan mu, mu+1, ... up to this until an annulus is found");
  sub->add_option("--budget", *budget, "Iteration budget per mu")->capture_default_str();
  sub->callback([&h, C, s, mu, d, mu_to, budget] {
    h = [C, s, mu, d, mu_to, budget] {
      lattice::SparseAnnulusParams p{rational_arg(*C, "C"), rational_arg(*s, "s"), *d, rational_arg(*mu, "mu")};
      auto report = lattice::sparse_annulus_search(p, {*budget});
      while (!report.found && p.mu + 1 <= Rational(BigInt(static_cast<unsigned long>(*mu_to)))) {
        p.mu += 1;
        report = lattice::sparse_annulus_search(p, {*budget});
      }
      Outcome o;
      o.json = search_json(report, p);
      if (!report.found) o.code = kDomainFailure;
      if (report.found) point_rows(o, report.points);
      return o;
    };
  });
}

template <std::size_t Dim>
Json pair_json(const lattice::LatticePoint<Dim>& a, const lattice::LatticePoint<Dim>& b) {
  return Json{{"points", {a.x, b.x}}, {"norms", {a.norm2(), b.norm2()}}, {"distance2", lattice::distance2(a, b)}};
}

void add_prop23(CLI::App& app, Handler& h) {
  auto* sub = app.add_subcommand("prop23", "Two lattice points at distance 1 in [lambda, lambda + alpha lambda^(1/4)]");
  auto lambda = std::make_shared<std::string>(), alpha = std::make_shared<std::string>();
  sub->add_option("--lambda", *lambda, "Inner squared radius, rational")->required();
  sub->add_option("--alpha", *alpha, "Width constant > 4 sqrt 2, rational")->required();
  sub->callback([&h, lambda, alpha] {
    h = [lambda, alpha] {
      const auto r = lattice::prop23_construct(rational_arg(*lambda, "lambda"), rational_arg(*alpha, "alpha"));
      Outcome o;
      o.json = header();
      o.json["lambda"] = io::rational_string(r.lambda);
      o.json["alpha"] = io::rational_string(r.width.coeff());
      o.json["width"] = r.width.expression();
      o.json.update(pair_json(r.first, r.second));
      o.json["approx"] = {{"upper", to_double(r.lambda) + r.width.approx()}};
      point_rows(o, std::vector{r.first, r.second});
      return o;
    };
  });
}

void add_prop26(CLI::App& app, Handler& h) {
  auto* sub = app.add_subcommand("prop26", "Two lattice points at distance 1 in [m, m + C m^(1/8)]");
  auto m = std::make_shared<std::string>(), C = std::make_shared<std::string>(), beta = std::make_shared<std::string>();
  sub->add_option("--m", *m, "Inner squared radius, rational")->required();
  sub->add_option("--C", *C, "Width constant > 4 * 8^(1/4), rational")->required();
  sub->add_option("--beta", *beta, "Window constant in (2 sqrt 2, C^2/16); default near the midpoint");
  sub->callback([&h, m, C, beta] {
    h = [m, C, beta] {
      std::optional<Rational> b;
      if (!beta->empty()) b = rational_arg(*beta, "beta");
      const auto r = lattice::prop26_construct(rational_arg(*m, "m"), rational_arg(*C, "C"), b);
      Outcome o;
      o.json = header();
      o.json["m"] = io::rational_string(r.m);
      o.json["C"] = io::rational_string(r.width.coeff());
      o.json["beta"] = io::rational_string(r.beta);
      o.json["s"] = r.s;
      o.json["width"] = r.width.expression();
      o.json.update(pair_json(r.first, r.second));
      o.json["approx"] = {{"upper", to_double(r.m) + r.width.approx()}};
      point_rows(o, std::vector{r.first, r.second});
      return o;
    };
  });
}

Json interval_json(const RationalInterval& i) {
  return Json::array({io::rational_string(i.lower), io::rational_string(i.upper)});
}

void add_thm25(CLI::App& app, Handler& h, const Globals& g) {
  auto* sub = app.add_subcommand("thm25", "Sparse spherical shell from a certified gap");
  auto d = std::make_shared<std::int64_t>();
  auto h0 = std::make_shared<std::int64_t>();
  auto limit = std::make_shared<std::int64_t>(lattice::PipelineOptions{}.verify_norm_limit);
  auto budget = std::make_shared<std::uint64_t>(lattice::EnumerationBudget{}.max_iterations);
  sub->add_option("--d", *d, "Separation")->required();
  sub->add_option("--h", *h0, "Inner gap length h0")->required();
  sub->add_option("--verify-limit", *limit, "Enumerate the shell directly when its outer norm is at most this")
      ->capture_default_str();
  sub->add_option("--budget", *budget, "Enumeration budget")->capture_default_str();
  sub->callback([&h, &g, d, h0, limit, budget] {
    h = [&g, d, h0, limit, budget] {
      lattice::PipelineOptions opt;
      opt.threads = g.threads;
      opt.verify_norm_limit = *limit;
      opt.budget = {*budget};
      const auto r = lattice::theorem25_pipeline(*d, *h0, opt);
      Outcome o;
      Json& j = o.json;
      j = header();
      j["d"] = r.d;
      j["h0"] = r.h0;
      j["beta"] = r.beta.get_str();
      Json D = Json::array();
      for (const auto& v : r.D) D.push_back(v.get_si());
      j["D"] = std::move(D);
      j["certificate"] = io::to_json(r.certificate);
      j["witness_cells"] = r.witnesses.size();
      j["h_out"] = {{"expression", r.h_out.expression()}, {"interval", interval_json(r.h_interval)}};
      j["m"] = {{"expression", r.m.expression()}, {"interval", interval_json(r.m_interval)}};
      j["shell_upper"] = io::rational_string(r.shell_upper);
      const auto& v = r.verification;
      Json ver = {{"ran", v.ran}};
      if (v.ran) {
        ver["points"] = points_json(v.points);
        ver["min_distance2"] = optional_int(v.min_distance2);
        ver["sparse"] = v.sparse;
      } else {
        ver["skipped_reason"] = v.skipped_reason;
      }
      j["verification"] = std::move(ver);
      j["approx"] = {{"h_out", r.h_out.approx()}, {"m", r.m.approx()}};
      if (v.ran && !v.sparse) o.code = kDomainFailure;
      if (v.ran) point_rows(o, v.points);
      return o;
    };
  });
}

// --- manifests ---------------------------------------------------------------------

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

std::string utc_timestamp() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

Json parameters_of(const CLI::App* sub) {
  Json params = Json::object();
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->get_name() == "--help") continue;
    const std::string key = opt->get_name().substr(opt->get_name().find_first_not_of('-'));
    if (opt->count() > 0) {
      const auto& res = opt->results();
      if (opt->get_type_size() == 0) {
        params[key] = true;
      } else if (res.size() == 1) {
        params[key] = res.front();
      } else {
        params[key] = res;
      }
    } else if (!opt->get_default_str().empty()) {
      params[key] = opt->get_default_str();
    }
  }
  return params;
}

// Arguments with --out / --manifest removed: what a replay re-runs.
std::vector<std::string> replay_args(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--out" || a == "--manifest") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0 || a.rfind("--manifest=", 0) == 0) continue;
    kept.push_back(a);
  }
  return kept;
}

struct Execution {
  int code = kSuccess;
  std::string subcommand;
  Json parameters;
  Globals globals;
  std::optional<Outcome> outcome;
};

Execution execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

void add_replay(CLI::App& app, Handler& h, std::ostream& err) {
  auto* sub = app.add_subcommand("replay", "Re-run a manifest and compare its output digest");
  auto path = std::make_shared<std::string>();
  sub->add_option("manifest", *path, "Manifest JSON file")->required();
  sub->callback([&h, &err, path] {
    h = [&err, path] {
      std::ifstream in(*path);
      if (!in) throw UsageError("cannot open manifest '" + *path + "'");
      Json manifest;
      try {
        manifest = Json::parse(in);
      } catch (const Json::parse_error& e) {
        throw UsageError(std::string("manifest is not valid JSON: ") + e.what());
      }
      if (!manifest.contains("args") || !manifest["args"].is_array() || !manifest.contains("digest"))
        throw UsageError("manifest lacks 'args' or 'digest'");
      const auto args = manifest["args"].get<std::vector<std::string>>();
      if (!args.empty() && args.front() == "replay") throw UsageError("a manifest cannot replay a replay");
      std::ostringstream sink;
      const Execution ex = execute(args, sink, err);
      Outcome o;
      o.json = header();
      o.json["subcommand"] = manifest.value("subcommand", "");
      o.json["expected"] = manifest["digest"];
      if (!ex.outcome) throw Error(Errc::verification_failed, "replayed command failed with exit code " + std::to_string(ex.code));
      const std::string actual = output_digest(ex.outcome->json);
      o.json["actual"] = actual;
      o.json["match"] = actual == manifest["digest"].get<std::string>();
      if (!o.json["match"].get<bool>()) o.code = kDomainFailure;
      return o;
    };
  });
}

Execution execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Execution ex;
  Globals& g = ex.globals;
  CLI::App app{"Exact tools for sums of squares, quadratic-form gaps and sparse lattice shells", "quadgap"};
  app.set_version_flag("--version", QUADGAP_VERSION);
  app.set_help_flag("--help", "Print this help message and exit");  // frees -h; subcommands use --h
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
  app.add_option("--out", g.out_path, "Write primary output to FILE instead of stdout");
  app.add_option("--manifest", g.manifest_path, "Write a run manifest to FILE");

  Handler handler;
  add_primes(app, handler, g);
  add_symbol(app, handler);
  add_sieve2sq(app, handler, g);
  add_gaps2sq(app, handler, g);
  add_bambah_chowla(app, handler, g);
  add_gaps3sq(app, handler);
  add_construct_gap(app, handler, g, err);
  add_verify_gap(app, handler, g);
  add_annulus_enum(app, handler);
  add_shell_enum(app, handler);
  add_annulus_search(app, handler);
  add_prop23(app, handler);
  add_prop26(app, handler);
  add_thm25(app, handler, g);
  add_replay(app, handler, err);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ex;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ex;
  } catch (const CLI::CallForVersion&) {
    out << QUADGAP_VERSION << '\n';
    return ex;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    ex.code = kUsage;
    return ex;
  }

  for (const CLI::App* sub : app.get_subcommands()) {
    ex.subcommand = sub->get_name();
    ex.parameters = parameters_of(sub);
  }
  try {
    ex.outcome = handler();
    ex.code = ex.outcome->code;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    ex.code = kUsage;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    ex.code = kDomainFailure;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    ex.code = kDomainFailure;
  }
  return ex;
}

}  // namespace

Json strip_approx(const Json& j) {
  if (j.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : j.items())
      if (k != "approx") out[k] = strip_approx(v);
    return out;
  }
  if (j.is_array()) {
    Json out = Json::array();
    for (const auto& v : j) out.push_back(strip_approx(v));
    return out;
  }
  return j;
}

std::string output_digest(const Json& j) { return "sha256:" + sha256_hex(strip_approx(j).dump()); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Execution ex = execute(args, out, err);
  if (!ex.outcome) return ex.code;
  const Outcome& o = *ex.outcome;
  const std::string text = ex.globals.format == "csv" ? render_csv(o) : o.json.dump(2) + "\n";
  if (ex.globals.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(ex.globals.out_path, std::ios::binary);
    if (!(file << text)) {
      err << "error: cannot write '" << ex.globals.out_path << "'\n";
      return kUsage;
    }
  }
  if (!ex.globals.manifest_path.empty()) {
    Json manifest = {{"version", io::kSchemaVersion},
                     {"subcommand", ex.subcommand},
                     {"args", replay_args(args)},
                     {"parameters", ex.parameters},
                     {"format", ex.globals.format},
                     {"threads", ex.globals.threads},
                     {"artifact_version", QUADGAP_VERSION},
                     {"timestamp", utc_timestamp()},
                     {"exit_code", ex.code},
                     {"digest", output_digest(o.json)}};
    std::ofstream file(ex.globals.manifest_path, std::ios::binary);
    if (!(file << manifest.dump(2) << '\n')) {
      err << "error: cannot write manifest '" << ex.globals.manifest_path << "'\n";
      return kUsage;
    }
  }
  return ex.code;
}

}  // namespace quadgap::cli
