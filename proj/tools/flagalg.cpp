// Command-line front end: theorem battery, reconstruction, derivations,
// ad-hoc products and poset enumeration. JSON goes to stdout (or --out),
// a human summary to stderr.
//
// Exit codes: 0 success, 1 theorem violation or failed reconstruction,
// 2 input or capability error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "flagalg/battery.hpp"
#include "flagalg/derivations.hpp"
#include "flagalg/io.hpp"
#include "flagalg/reconstruction.hpp"

namespace {

using namespace flagalg;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kInputError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("invalid JSON in " + what + ": " + e.what());
  }
}

// Inline JSON, or @path to read it from a file.
Json json_argument(const std::string& value, const std::string& what) {
  if (!value.empty() && value.front() == '@') return parse_json(read_file(value.substr(1)), what);
  return parse_json(value, what);
}

void emit(const Json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + out + "'");
  f << text;
}

unsigned thread_budget() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FLAGALG_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v < 1) throw ParseError("FLAGALG_THREADS must be a positive integer");
      n = static_cast<unsigned>(v);
    } catch (const std::logic_error&) {
      throw ParseError(std::string("FLAGALG_THREADS is not an integer: '") + env + "'");
    }
  }
  return n;
}

struct CommonOptions {
  std::string ring = "Q";
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_check(const std::string& file, std::optional<int> up_to, const CommonOptions& common, bool timings) {
  if (file.empty() == !up_to) throw ParseError("check needs exactly one of a poset file or --all-up-to");
  const AnyRing ring = parse_ring(common.ring);
  std::vector<Poset> posets;
  if (up_to) {
    if (*up_to < 1 || *up_to > 5) throw ParseError("--all-up-to must be between 1 and 5");
    for (int m = 1; m <= *up_to; ++m) {
      for (auto& p : enumerate_posets(static_cast<std::size_t>(m))) posets.push_back(std::move(p));
    }
  } else {
    posets.push_back(parse_poset(read_file(file)));
  }
  const BatteryOptions opt{common.seed, timings};
  const auto reports = run_battery_all(posets, ring, opt, thread_budget());
  const Json report = report_to_json(reports, ring, opt);
  emit(report, common.out);

  for (const auto& r : reports) {
    for (const auto& t : r.results) {
      if (t.status == Status::fail || t.status == Status::unsupported) {
        std::cerr << status_name(t.status) << ": " << t.id << " on poset {" << r.poset.to_text() << "}: "
                  << t.detail.dump() << "\n";
      }
    }
  }
  const auto& s = report["summary"];
  std::cerr << "checked " << posets.size() << " poset(s) over " << ring_name(ring) << ": " << s["pass"] << " pass, "
            << s["fail"] << " fail, " << s["skipped"] << " skipped, " << s["unsupported"] << " unsupported\n";
  return exit_code(reports);
}

template <class Ring>
int reconstruct_with(const Ring& ring, const Json& input, const CommonOptions& common) {
  AbstractAlgebra<Ring> a(table_from_json(input, ring));
  try {
    auto r = reconstruct_poset(a, common.seed);
    Json out = reconstruction_to_json(ring, r);
    out["status"] = "pass";
    emit(out, common.out);
    std::cerr << "recovered a poset with " << r.poset.size() << " element(s) and " << r.edges.size() << " cover(s)\n";
    return kOk;
  } catch (const ReconstructionError& e) {
    emit(Json{{"ring", ring.name()}, {"status", "fail"}, {"error", e.what()}}, common.out);
    std::cerr << "reconstruction failed: " << e.what() << "\n";
    return kViolation;
  }
}

int cmd_reconstruct(const std::string& file, bool ring_given, const CommonOptions& common) {
  const Json input = parse_json(read_file(file), file);
  std::string spec = common.ring;
  if (input.is_object() && input.contains("ring") && input["ring"].is_string()) {
    const auto declared = input["ring"].get<std::string>();
    if (ring_given && ring_name(parse_ring(declared)) != ring_name(parse_ring(spec))) {
      throw ParseError("--ring " + spec + " contradicts the table's ring " + declared);
    }
    spec = declared;
  }
  return std::visit([&](const auto& r) { return reconstruct_with(r, input, common); }, parse_ring(spec));
}

template <class Ring>
int derivations_with(const Ring& ring, const Poset& p, int n, const CommonOptions& common) {
  auto ctx = AlgebraContext<Ring>::make(p, static_cast<std::size_t>(n), ring);
  auto sys = leibniz_system(ctx);
  auto kernel_module = solve_leibniz(sys);
  Json basis = Json::array();
  for (const auto& v : kernel_module.basis()) {
    auto d = derivation_from_vector(sys, v);
    if (!check_derivation(ctx, d)) throw Error("solver returned a map that is not a derivation");
    Json images = Json::array();
    for (std::size_t i = 0; i < ctx->dim(); ++i) {
      if (is_zero_vector(ring, d.image(i))) continue;
      Json tuple = Json::array();
      for (auto x : ctx->tuple(i).entries) tuple.push_back(p.name(x));
      images.push_back(Json{{"of", tuple}, {"image", element_to_json(FlagElement<Ring>::from_dense(ctx, d.image(i)))}});
    }
    basis.push_back(std::move(images));
  }
  const std::size_t rank = kernel_module.rank();
  const char* regime = n == 2 ? "classical" : n == 3 ? "theorem" : "unverified";
  Json out{{"ring", ring.name()},      {"n", n},
           {"dim", ctx->dim()},        {"unknowns", sys.unknowns},
           {"equations", sys.total_rows}, {"nonzero_equations", sys.rows.size()},
           {"rank", rank},             {"regime", regime},
           {"basis", std::move(basis)}};
  int code = kOk;
  if (n == 3) {
    out["status"] = rank == 0 ? "pass" : "THEOREM VIOLATION";
    if (rank != 0) code = kViolation;
  }
  emit(out, common.out);
  if (n >= 4) std::cerr << "warning: n = " << n << " is an unverified regime; no theorem is asserted\n";
  if (code == kViolation) std::cerr << "THEOREM VIOLATION: nonzero derivation of a third flag algebra\n";
  std::cerr << "derivation module rank " << rank << " (d = " << ctx->dim() << ")\n";
  return code;
}

int cmd_derivations(const std::string& file, int n, const CommonOptions& common) {
  if (n < 2) throw ParseError("--n must be at least 2");
  const Poset p = parse_poset(read_file(file));
  return std::visit([&](const auto& r) { return derivations_with(r, p, n, common); }, parse_ring(common.ring));
}

template <class Ring>
int multiply_with(const Ring& ring, const Poset& p, int n, const Json& left, const Json& right, const CommonOptions& common) {
  auto ctx = AlgebraContext<Ring>::make(p, static_cast<std::size_t>(n), ring);
  auto f = element_from_json(ctx, left), g = element_from_json(ctx, right);
  emit(Json{{"ring", ring.name()}, {"n", n}, {"left", element_to_json(f)}, {"right", element_to_json(g)},
            {"product", element_to_json(convolve(f, g))}},
       common.out);
  return kOk;
}

int cmd_multiply(const std::string& file, int n, const std::string& left, const std::string& right,
                 const CommonOptions& common) {
  if (n < 2) throw ParseError("--n must be at least 2");
  const Poset p = parse_poset(read_file(file));
  const Json l = json_argument(left, "--left"), r = json_argument(right, "--right");
  return std::visit([&](const auto& ring) { return multiply_with(ring, p, n, l, r, common); }, parse_ring(common.ring));
}

int cmd_enumerate(int size, const CommonOptions& common) {
  if (size < 1 || size > 6) throw ParseError("--size must be between 1 and 6");
  Json posets = Json::array();
  const auto all = enumerate_posets(static_cast<std::size_t>(size));
  for (const auto& p : all) posets.push_back(poset_to_json(p));
  emit(Json{{"size", size}, {"count", all.size()}, {"posets", std::move(posets)}}, common.out);
  std::cerr << all.size() << " poset(s) of size " << size << " up to isomorphism\n";
  return kOk;
}

template <class Ring>
int table_with(const Ring& ring, const Poset& p, int n, std::optional<std::uint64_t> scramble_seed, const CommonOptions& common) {
  auto ctx = AlgebraContext<Ring>::make(p, static_cast<std::size_t>(n), ring);
  if (scramble_seed) {
    if (n != 3) throw ParseError("--scramble-seed applies to n = 3 only");
    emit(table_to_json(scramble(ctx, *scramble_seed).table()), common.out);
  } else {
    emit(table_to_json(ctx->structure_constants()), common.out);
  }
  return kOk;
}

int cmd_table(const std::string& file, int n, std::optional<std::uint64_t> scramble_seed, const CommonOptions& common) {
  if (n < 2) throw ParseError("--n must be at least 2");
  const Poset p = parse_poset(read_file(file));
  return std::visit([&](const auto& r) { return table_with(r, p, n, scramble_seed, common); }, parse_ring(common.ring));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial flag incidence algebras of finite posets"};
  app.require_subcommand(1);
  CommonOptions common;
  auto add_common = [&](CLI::App* sub, bool seed) {
    sub->add_option("--ring", common.ring, "Q | Fp:<p> | Z | Zm:<m>");
    if (seed) sub->add_option("--seed", common.seed, "seed for every randomized step");
    sub->add_option("--out", common.out, "write JSON here instead of stdout");
  };

  std::string file;
  std::optional<int> up_to;
  bool timings = false;
  auto* check = app.add_subcommand("check", "run the theorem battery");
  check->add_option("poset", file, "poset file");
  check->add_option("--all-up-to", up_to, "every poset with 1..m elements (m <= 5)");
  check->add_flag("--timings", timings, "add wall-clock times to the report");
  add_common(check, true);

  auto* reconstruct = app.add_subcommand("reconstruct", "recover a poset from structure constants");
  reconstruct->add_option("table", file, "structure constants JSON")->required();
  add_common(reconstruct, true);

  int n = 3;
  auto* derivations = app.add_subcommand("derivations", "solve for the derivations of I^n(P, R)");
  derivations->add_option("poset", file, "poset file")->required();
  derivations->add_option("--n", n, "flag order");
  add_common(derivations, false);

  std::string left, right;
  auto* multiply = app.add_subcommand("multiply", "product of two elements");
  multiply->add_option("poset", file, "poset file")->required();
  multiply->add_option("--n", n, "flag order");
  multiply->add_option("--left", left, "element JSON or @file")->required();
  multiply->add_option("--right", right, "element JSON or @file")->required();
  add_common(multiply, false);

  int size = 0;
  auto* enumerate = app.add_subcommand("enumerate-posets", "posets of a given size up to isomorphism");
  enumerate->add_option("--size", size, "number of elements (1..6)")->required();
  add_common(enumerate, false);

  std::optional<std::uint64_t> scramble_seed;
  auto* table = app.add_subcommand("structure-constants", "multiplication table of I^n(P, R)");
  table->add_option("poset", file, "poset file")->required();
  table->add_option("--n", n, "flag order");
  table->add_option("--scramble-seed", scramble_seed, "conjugate by a seeded random invertible map");
  add_common(table, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (check->parsed()) return cmd_check(file, up_to, common, timings);
    if (reconstruct->parsed()) return cmd_reconstruct(file, reconstruct->count("--ring") > 0, common);
    if (derivations->parsed()) return cmd_derivations(file, n, common);
    if (multiply->parsed()) return cmd_multiply(file, n, left, right, common);
    if (enumerate->parsed()) return cmd_enumerate(size, common);
    if (table->parsed()) return cmd_table(file, n, scramble_seed, common);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const CapabilityError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kInputError;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kViolation;
  }
  return kInputError;
}
