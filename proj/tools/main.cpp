#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>

#include "fspace/fspace.hpp"

namespace {

using namespace fspace;

struct Options {
  std::string kind = "laplace1d";
  std::uint64_t n = 0;
  std::uint64_t subdomains = 1;
  std::uint64_t overlap = 1;
  std::string matrix_path;
  std::string decomposition_path;
  std::string out_dir = ".";
  double tol = 1e-8;
  std::uint64_t seed = CounterRng::kDefaultSeed;
  bool n_given = false;
  bool files_given = false;
};

struct Instance {
  DenseSymMatrix a;
  Decomposition d;
};

ProblemSpec spec_from(const Options& o) {
  ProblemSpec spec;
  spec.kind = problem_kind_from_string(o.kind);
  spec.n = o.n;
  spec.subdomains = o.subdomains;
  spec.overlap = o.overlap;
  validate(spec);
  return spec;
}

Instance load_instance(const Options& o) {
  if (o.files_given) {
    if (o.n_given)
      throw InvalidSpec("give either a problem spec or input files, not both");
    if (o.matrix_path.empty() || o.decomposition_path.empty())
      throw InvalidSpec("file input needs both --matrix and --decomposition");
    DenseSymMatrix a = read_sym_matrix_market_file(o.matrix_path);
    Decomposition d =
        Decomposition::from_text(detail::read_text_file(o.decomposition_path), a.dim());
    return {std::move(a), std::move(d)};
  }
  if (!o.n_given)
    throw InvalidSpec("need a problem spec (--n ...) or input files (--matrix, --decomposition)");
  ProblemSpec spec = spec_from(o);
  return {laplacian(spec), strip_decomposition(spec)};
}

void require_tol(const Options& o) {
  if (!(o.tol > 0.0 && o.tol < 1.0)) throw InvalidSpec("tol must lie in (0, 1)");
}

std::string join(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);
}

int run_gen(const Options& o) {
  if (o.files_given) throw InvalidSpec("gen generates from a problem spec, not from files");
  if (!o.n_given) throw InvalidSpec("gen requires --n");
  ProblemSpec spec = spec_from(o);
  DenseSymMatrix a = laplacian(spec);
  Decomposition d = strip_decomposition(spec);

  ensure_out_dir(o.out_dir);
  const std::string matrix_file = join(o.out_dir, "matrix.mtx");
  const std::string decomposition_file = join(o.out_dir, "decomposition.txt");
  write_matrix_market_file(matrix_file, a, MmFormat::coordinate);
  detail::atomic_write_text(decomposition_file, d.to_text());
  std::cout << "wrote " << matrix_file << " (" << a.dim() << "x" << a.dim() << ")\n";
  std::cout << "wrote " << decomposition_file << " (" << d.count() << " subdomains)\n";
  return 0;
}

int run_certify(const Options& o) {
  require_tol(o);
  Instance inst = load_instance(o);
  SchwarzOperators ops(inst.d, inst.a);
  SpectralCertificate cert = certify(OperatorTriple(ops.r_map(), ops.a(), ops.b()));

  KeyValueReport rep = certificate_report(cert, o.seed, instance_hash(inst.a, inst.d));
  ensure_out_dir(o.out_dir);
  write_report_file(join(o.out_dir, "certificate.txt"), rep);
  std::cout << rep.to_text();
  return 0;
}

int run_solve(const Options& o) {
  require_tol(o);
  Instance inst = load_instance(o);
  SchwarzOperators ops(inst.d, inst.a);
  Vector rhs(ops.a().dim(), 1.0);

  // solve first: an indefinite matrix should surface as a solver breakdown,
  // not as a certification failure
  PcgResult res = pcg(ops.a(), schwarz_preconditioner(ops), rhs, o.tol);
  SpectralCertificate cert = certify(OperatorTriple(ops.r_map(), ops.a(), ops.b()));
  res.report.kappa_used = cert.kappa;
  res.report.iteration_bound = pcg_iteration_bound(cert.kappa, o.tol);

  KeyValueReport rep = solve_report(res.report, o.tol, o.seed, instance_hash(inst.a, inst.d));
  ensure_out_dir(o.out_dir);
  write_report_file(join(o.out_dir, "solve.txt"), rep);
  detail::atomic_write_text(join(o.out_dir, "history.csv"),
                            residual_history_csv(res.report.residual_history));
  std::cout << rep.to_text();

  if (!res.report.converged) {
    std::cerr << "error: solver did not converge within the iteration limit\n";
    return 1;
  }
  if (res.report.iterations > res.report.iteration_bound) {
    std::cerr << "error: iteration count exceeds the certified bound\n";
    return 1;
  }
  return 0;
}

int run_verify(const Options& o) {
  VerifySummary summary = run_property_suite(o.seed);
  const std::string text = verify_summary_text(summary);
  ensure_out_dir(o.out_dir);
  detail::atomic_write_text(join(o.out_dir, "verify.txt"), text);
  std::cout << text;
  return summary.all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-inverse and additive Schwarz certification toolkit"};
  app.require_subcommand(1);
  Options o;

  auto add_problem_flags = [&](CLI::App* cmd) {
    cmd->add_option("--kind", o.kind, "model kind: laplace1d or laplace2d");
    cmd->add_option_function<std::uint64_t>(
        "--n",
        [&o](std::uint64_t v) {
          o.n = v;
          o.n_given = true;
        },
        "interior points per dimension");
    cmd->add_option("--subdomains", o.subdomains, "number of strips");
    cmd->add_option("--overlap", o.overlap, "cells shared between neighboring strips");
  };
  auto add_file_flags = [&](CLI::App* cmd) {
    cmd->add_option_function<std::string>(
        "--matrix",
        [&o](const std::string& p) {
          o.matrix_path = p;
          o.files_given = true;
        },
        "matrix market input file");
    cmd->add_option_function<std::string>(
        "--decomposition",
        [&o](const std::string& p) {
          o.decomposition_path = p;
          o.files_given = true;
        },
        "one-line-per-subdomain decomposition file");
  };
  auto add_out_flag = [&](CLI::App* cmd) {
    cmd->add_option("--out", o.out_dir, "output directory");
  };

  CLI::App* gen = app.add_subcommand("gen", "generate a model instance and write it to files");
  add_problem_flags(gen);
  add_out_flag(gen);

  CLI::App* certify_cmd =
      app.add_subcommand("certify", "certify the spectral bounds of the preconditioned operator");
  add_problem_flags(certify_cmd);
  add_file_flags(certify_cmd);
  add_out_flag(certify_cmd);
  certify_cmd->add_option("--tol", o.tol, "tolerance stamp for reports");
  certify_cmd->add_option("--seed", o.seed, "seed stamp for reports");

  CLI::App* solve_cmd =
      app.add_subcommand("solve", "solve with all-ones right-hand side using the preconditioner");
  add_problem_flags(solve_cmd);
  add_file_flags(solve_cmd);
  add_out_flag(solve_cmd);
  solve_cmd->add_option("--tol", o.tol, "relative residual tolerance");
  solve_cmd->add_option("--seed", o.seed, "seed stamp for reports");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the property suite on seeded random instances");
  add_out_flag(verify_cmd);
  verify_cmd->add_option("--seed", o.seed, "seed for the instance generator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // 0 is --help; anything else is a config error
  }

  try {
    if (gen->parsed()) return run_gen(o);
    if (certify_cmd->parsed()) return run_certify(o);
    if (solve_cmd->parsed()) return run_solve(o);
    if (verify_cmd->parsed()) return run_verify(o);
  } catch (const InvalidSpec& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidDecomposition& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotCovering& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotSymmetric& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
