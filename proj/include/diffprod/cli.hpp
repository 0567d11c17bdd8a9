#pragma once

// Command-line front end. `run` takes the arguments after the program
// name and writes to the given streams; exit codes are
//   0 success, 1 verification failure, 2 malformed input or refused request.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "diffprod/bigint.hpp"
#include "diffprod/errors.hpp"
#include "diffprod/rational.hpp"
#include "diffprod/recurrence.hpp"
#include "diffprod/report_io.hpp"
#include "diffprod/search.hpp"
#include "diffprod/set_io.hpp"
#include "diffprod/setcore.hpp"

namespace diffprod::cli {

using Json = nlohmann::ordered_json;

struct Options {
  std::optional<std::uint32_t> mod;
  std::optional<std::uint32_t> mod2;
  std::string set;
  std::string set2;
  std::optional<std::string> alpha;
  std::optional<std::string> beta;
  std::uint64_t L = 1;
  std::int64_t b = 1;
  std::uint64_t seed = 0;
  std::uint64_t iterations = 0;
  std::uint64_t restarts = 0;
  std::uint32_t workers = 1;
  std::string mode = "exhaustive";
  std::optional<std::string> budget;
  std::uint32_t min_size = 0;
  bool timing = false;
  bool dilations = false;
  std::string format = "text";
  std::string out;
};

/// What a subcommand produced, before formatting.
struct Outcome {
  Json config;
  std::string text;
  Json json;
  std::string csv;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read set file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Loads `--set` input: an inline literal, or `@path` to a set file. A
/// `mod N` header in the file must agree with `--mod` when both are given.
inline ResidueSet load_set(const std::string& spec, std::optional<std::uint32_t> modulus, const char* flag) {
  SetFile parsed;
  if (!spec.empty() && spec.front() == '@') {
    parsed = parse_set_file(read_file(spec.substr(1)));
  } else {
    parsed.elements = parse_set_literal(spec);
  }
  if (parsed.modulus && modulus && *parsed.modulus != *modulus)
    throw InvalidArgument(std::string(flag) + " file declares mod " + std::to_string(*parsed.modulus) +
                          " but --mod is " + std::to_string(*modulus));
  const auto n = parsed.modulus ? parsed.modulus : modulus;
  if (!n) throw InvalidArgument(std::string(flag) + " needs --mod (or a 'mod N' file header)");
  return make_residue_set(*n, parsed.elements);
}

inline Rational density_or(const std::optional<std::string>& text, const Rational& fallback) {
  return text ? Rational::parse(*text) : fallback;
}

inline std::string echo_line(const std::string& command, const Json& config) {
  std::string line = "# " + command;
  for (const auto& [k, v] : config.items()) line += " " + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
  return line + "\n";
}

inline Outcome set_outcome(Json config, const ResidueSet& s) {
  Outcome o;
  o.config = std::move(config);
  o.text = format_set_literal(s) + "\n";
  o.json["modulus"] = s.modulus();
  o.json["set"] = format_set_literal(s);
  return o;
}

inline Outcome kv_outcome(Json config, Json result) {
  Outcome o;
  o.config = std::move(config);
  for (const auto& [k, v] : result.items()) o.text += k + "=" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  o.json = std::move(result);
  return o;
}

}  // namespace detail

inline Outcome cmd_diffset(const Options& o) {
  const auto e = detail::load_set(o.set, o.mod, "--set");
  return detail::set_outcome({{"mod", e.modulus()}, {"set", format_set_literal(e)}}, difference_set(e));
}

inline Outcome cmd_prodset(const Options& o) {
  const auto s1 = detail::load_set(o.set, o.mod, "--set");
  const auto s2 = detail::load_set(o.set2, o.mod2 ? o.mod2 : o.mod, "--set2");
  return detail::set_outcome(
      {{"mod", s1.modulus()}, {"set", format_set_literal(s1)}, {"set2", format_set_literal(s2)}},
      product_set(s1, s2));
}

inline Outcome cmd_mindiv(const Options& o) {
  const auto s = detail::load_set(o.set, o.mod, "--set");
  const auto d = minimal_divisor(s);
  Outcome out;
  out.config = {{"mod", s.modulus()}, {"set", format_set_literal(s)}};
  out.text = (d ? std::to_string(*d) : "none") + "\n";
  out.json["d"] = d ? Json(*d) : Json(nullptr);
  return out;
}

inline Outcome cmd_returnset(const Options& o) {
  const auto a = detail::load_set(o.set, o.mod, "--set");
  return detail::set_outcome({{"mod", a.modulus()}, {"set", format_set_literal(a)}}, return_set(a));
}

inline Outcome cmd_poincare(const Options& o) {
  const auto a = detail::load_set(o.set, o.mod, "--set");
  Json config = {{"mod", a.modulus()}, {"set", format_set_literal(a)}, {"b", o.b}};
  const auto m = poincare_min_return(a, o.b);
  return detail::kv_outcome(std::move(config), {{"m", m}, {"bound", poincare_bound(a)}});
}

inline Outcome cmd_lemma1(const Options& o) {
  const auto a = detail::load_set(o.set, o.mod, "--set");
  Json config = {{"mod", a.modulus()}, {"set", format_set_literal(a)}, {"L", o.L}, {"b", o.b}};
  const auto m = lemma1_witness(a, o.L, o.b);
  Json result = {{"m", m}};
  if (o.L <= 4096) result["bound"] = to_decimal(lemma1_bound(a, o.L));
  return detail::kv_outcome(std::move(config), std::move(result));
}

inline Outcome cmd_bound(const Options& o) {
  if (!o.alpha || !o.beta) throw InvalidArgument("bound needs --alpha and --beta");
  const auto report = theoretical_bound(Rational::parse(*o.alpha), Rational::parse(*o.beta));
  Json config = {{"alpha", report.alpha.str()}, {"beta", report.beta.str()}};
  Json result = report.to_json();
  if (o.mod) {
    config["mod"] = *o.mod;
    result["d"] = cor2_divisor(report.k0, *o.mod);
  }
  return detail::kv_outcome(std::move(config), std::move(result));
}

inline Outcome cmd_witness(const Options& o) {
  const auto a = detail::load_set(o.set, o.mod, "--set");
  const auto bset = detail::load_set(o.set2, o.mod2 ? o.mod2 : o.mod, "--set2");
  const Rational alpha = detail::density_or(o.alpha, density(a));
  const Rational beta = detail::density_or(o.beta, density(bset));
  const auto report = theoretical_bound(alpha, beta);
  const auto w = factor_witness(a, bset, o.b, report);
  Json config = {{"mod", a.modulus()},         {"set", format_set_literal(a)}, {"mod2", bset.modulus()},
                 {"set2", format_set_literal(bset)}, {"alpha", alpha.str()},      {"beta", beta.str()},
                 {"b", o.b}};
  Json result = {{"b", w.b},
                 {"m", w.m},
                 {"j", w.j},
                 {"x", to_decimal(w.x)},
                 {"y", to_decimal(w.y)},
                 {"k0", to_decimal(w.k)},
                 {"digits", decimal_digits(w.k)}};
  return detail::kv_outcome(std::move(config), std::move(result));
}

inline Outcome cmd_verify(const Options& o) {
  const auto e1 = detail::load_set(o.set, o.mod, "--set");
  const auto e2 = detail::load_set(o.set2, o.mod2 ? o.mod2 : o.mod, "--set2");
  Json config = {{"mod", e1.modulus()}, {"set", format_set_literal(e1)}, {"set2", format_set_literal(e2)}};
  const auto d = verify_instance(e1, e2);
  const auto prod = product_set(difference_set(e1), difference_set(e2));
  return detail::kv_outcome(std::move(config), {{"d", d}, {"product", format_set_literal(prod)}});
}

inline Outcome cmd_sweep(const Options& o) {
  if (!o.mod) throw InvalidArgument("sweep needs --mod");
  SearchConfig c;
  c.modulus = *o.mod;
  c.alpha = detail::density_or(o.alpha, Rational(1, 2));
  c.beta = detail::density_or(o.beta, Rational(1, 2));
  c.mode = parse_search_mode(o.mode);
  c.seed = o.seed;
  c.iterations = o.iterations;
  c.restarts = o.restarts;
  c.workers = o.workers;
  c.dilations = o.dilations;
  if (o.budget && !parse_decimal(*o.budget, c.budget)) throw InvalidArgument("--budget must be a decimal integer");

  const auto record = run_sweep(c);
  // The worker count is not echoed: output bytes must not depend on it.
  Outcome out;
  out.config = {{"N", c.modulus},
                {"alpha", c.alpha.str()},
                {"beta", c.beta.str()},
                {"mode", to_string(c.mode)},
                {"seed", c.seed},
                {"iterations", c.iterations},
                {"restarts", c.restarts},
                {"budget", to_decimal(c.budget)},
                {"dilations", c.dilations},
                {"rng", std::string(kRngAlgorithm)}};
  out.json = to_json(record, o.timing);
  for (const auto& [k, v] : out.json.items())
    out.text += k + "=" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
  out.csv = to_csv({record}, o.timing);
  return out;
}

inline Outcome cmd_primes(const Options& o) {
  if (!o.mod) throw InvalidArgument("primes needs --mod p");
  const std::uint32_t min_size = o.min_size ? o.min_size : *o.mod / 2 + 1;
  BigInt cap = 1'000'000;
  if (o.budget && !parse_decimal(*o.budget, cap)) throw InvalidArgument("--budget must be a decimal integer");
  const auto rep = prime_coverage_report(*o.mod, min_size, cap, o.seed);
  Outcome out;
  out.config = {{"p", *o.mod},
                {"min_size", min_size},
                {"budget", to_decimal(cap)},
                {"seed", o.seed},
                {"rng", std::string(kRngAlgorithm)}};
  out.text = to_key_value(rep);
  out.json = to_json(rep);
  return out;
}

inline std::string render(const std::string& command, const Outcome& o, const std::string& format) {
  if (format == "text") return detail::echo_line(command, o.config) + o.text;
  if (format == "json") {
    Json doc;
    doc["command"] = command;
    doc["config"] = o.config;
    doc["result"] = o.json;
    return doc.dump(2) + "\n";
  }
  if (format == "csv") {
    if (o.csv.empty()) throw InvalidArgument("--format csv is only available for sweep");
    return detail::echo_line(command, o.config) + o.csv;
  }
  throw InvalidArgument("unknown --format '" + format + "' (text, csv, json)");
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Difference/product set toolkit for Z_N and finite recurrence systems", "diffprod"};
  app.require_subcommand(1);
  Options o;

  struct Command {
    const char* name;
    const char* help;
    Outcome (*fn)(const Options&);
  };
  const std::vector<Command> commands = {
      {"diffset", "difference set E - E mod N", cmd_diffset},
      {"prodset", "product set S1 * S2 mod N", cmd_prodset},
      {"mindiv", "smallest divisor d of N with dZ_N inside S", cmd_mindiv},
      {"returnset", "return-time set R(A) in the cyclic system Z_N", cmd_returnset},
      {"poincare", "minimal return m of A along b with its recurrence bound", cmd_poincare},
      {"lemma1", "minimal m with {mb, ..., Lmb} inside R(A), checked against the bound", cmd_lemma1},
      {"bound", "exact bound report (N_B, L, n, k0) for densities alpha, beta", cmd_bound},
      {"witness", "replay the factorization k0 b = x y with x in R(A), y in R(B)", cmd_witness},
      {"verify", "minimal d with dZ_N inside (E1 - E1)(E2 - E2)", cmd_verify},
      {"sweep", "extremal search for the worst-case minimal divisor", cmd_sweep},
      {"primes", "coverage of Z_p by (E - E)(E - E)", cmd_primes},
  };

  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--mod", o.mod, "modulus N (p for primes)");
    sub->add_option("--mod2", o.mod2, "modulus of the second set (defaults to --mod)");
    sub->add_option("--set", o.set, "set literal like 0,1,3 or @path to a set file");
    sub->add_option("--set2", o.set2, "second set literal or @path");
    sub->add_option("--alpha", o.alpha, "density as an exact fraction p/q");
    sub->add_option("--beta", o.beta, "density as an exact fraction p/q");
    sub->add_option("--L", o.L, "progression length L")->check(CLI::PositiveNumber);
    sub->add_option("--b", o.b, "nonzero step b");
    sub->add_option("--seed", o.seed, "64-bit seed");
    sub->add_option("--iterations", o.iterations, "hill-climb iterations per run");
    sub->add_option("--restarts", o.restarts, "additional independent hill-climb runs");
    sub->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--mode", o.mode, "sweep mode: exhaustive or hill_climb");
    sub->add_option("--budget", o.budget, "sweep pair budget / coverage exhaustive cap");
    sub->add_option("--min-size", o.min_size, "minimum set size for primes (default floor(p/2)+1)");
    sub->add_flag("--timing", o.timing, "write measured wall time into sweep output");
    sub->add_flag("--dilations", o.dilations, "also reduce exhaustive sweeps by unit dilations");
    sub->add_option("--format", o.format, "text, csv or json");
    sub->add_option("--out", o.out, "write output to this path instead of stdout");
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  const auto chosen = app.get_subcommands().front();
  const auto it = std::find_if(commands.begin(), commands.end(),
                               [&](const Command& c) { return chosen->get_name() == c.name; });
  try {
    const Outcome outcome = it->fn(o);
    const std::string text = render(it->name, outcome, o.format);
    if (o.out.empty()) {
      out << text;
    } else {
      std::ofstream f(o.out, std::ios::binary);
      if (!f) throw InvalidArgument("cannot write '" + o.out + "'");
      f << text;
    }
    return 0;
  } catch (const VerificationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace diffprod::cli
