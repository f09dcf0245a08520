// Command-line driver: run a transport case, run a convergence study,
// or audit the discrete maximum principle of a run.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crt/crt.hpp"

namespace {

struct RunSpec {
  std::string command;
  std::string case_name = "smooth-rotation";
  std::string mesh_file;
  std::vector<int> sizes = {40};
  std::string limiter = "fct-global";
  std::string viscosity = "minimum";
  std::optional<double> cfl;
  double reduce_factor = 0.5;
  std::optional<double> t_final;
  std::string out_dir = ".";
  std::vector<std::string> formats = {"csv"};
};

crt::Limiter parse_limiter(const std::string& s) {
  if (s == "galerkin") return crt::Limiter::Galerkin;
  if (s == "low-order") return crt::Limiter::LowOrder;
  if (s == "greedy") return crt::Limiter::Greedy;
  if (s == "fct-local") return crt::Limiter::FctLocal;
  if (s == "fct-global") return crt::Limiter::FctGlobal;
  throw CLI::ValidationError("--limiter", "unknown limiter: " + s);
}

crt::SchemeConfig make_config(const RunSpec& spec, const crt::TestCase& tc) {
  crt::SchemeConfig config;
  config.limiter = parse_limiter(spec.limiter);
  config.viscosity_kind = spec.viscosity == "bilinear"
                              ? crt::ViscosityKind::Bilinear
                              : crt::ViscosityKind::Minimum;
  config.cfl_target =
      spec.cfl ? *spec.cfl : tc.cfl_override.value_or(0.5);
  config.reduction_factor = spec.reduce_factor;
  config.t_final = spec.t_final ? *spec.t_final : tc.t_final;
  return config;
}

bool wants(const RunSpec& spec, const std::string& fmt) {
  for (const auto& f : spec.formats)
    if (f == fmt) return true;
  return false;
}

int worker_count() {
  if (const char* env = std::getenv("CR_TRANSPORT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

crt::TriMesh load_mesh(const RunSpec& spec, const crt::TestCase& tc) {
  if (!spec.mesh_file.empty()) return crt::read_mesh(spec.mesh_file);
  return crt::build_uniform_mesh(tc.bbox, spec.sizes.front());
}

int do_run(const RunSpec& spec) {
  const crt::TestCase tc = crt::find_case(spec.case_name);
  const crt::SchemeConfig config = make_config(spec, tc);
  const crt::TriMesh mesh = load_mesh(spec, tc);
  const crt::TransportProblem problem = crt::to_problem(tc, mesh);

  const crt::RunResult res = crt::run(problem, config);
  std::cout << spec.case_name << ": " << res.step_count << " steps ("
            << res.rejected_stage_count << " rejected), t = " << res.t_end
            << ", final range [" << res.min_history.back() << ", "
            << res.max_history.back() << "]\n";

  const crt::HalfMesh half = crt::refine_half(mesh);
  const crt::ScalarField bd = [&](const crt::Vec2& x) {
    return tc.exact(x, config.t_final);
  };
  const crt::P1HalfMeshFunction rec =
      crt::reconstruct(res.u, half, tc.exact ? &bd : nullptr);

  std::filesystem::create_directories(spec.out_dir);
  const std::string base = spec.out_dir + "/" + spec.case_name;
  if (wants(spec, "vtk")) {
    crt::write_vtk(res.u, base + "_cr.vtk");
    crt::write_vtk(rec, base + "_reconstruction.vtk");
    std::cout << "wrote " << base << "_cr.vtk, " << base
              << "_reconstruction.vtk\n";
  }
  if (wants(spec, "csv") && tc.exact) {
    const crt::ErrorReport cr_err =
        crt::error_norms(res.u, tc.exact, config.t_final);
    const crt::ErrorReport rec_err =
        crt::error_norms(rec, tc.exact, config.t_final);
    std::vector<crt::ConvergenceRow> rows(2);
    rows[0] = {tc.bbox.width() / spec.sizes.front(), cr_err.l2, 0.0,
               cr_err.linf, 0.0};
    rows[1] = {rows[0].h, rec_err.l2, 0.0, rec_err.linf, 0.0};
    crt::write_csv(rows, base + "_errors.csv",
                   "rows: CR field, reconstruction; case " + spec.case_name +
                       ", limiter " + spec.limiter);
    std::cout << "wrote " << base << "_errors.csv\n";
  }
  return 0;
}

int do_converge(const RunSpec& spec) {
  const crt::TestCase tc = crt::find_case(spec.case_name);
  crt::SchemeConfig config = make_config(spec, tc);
  if (spec.sizes.size() < 2)
    throw CLI::ValidationError("--n", "need at least two mesh sizes");

  const crt::ConvergenceStudy study =
      crt::convergence_study(tc, config, spec.sizes, worker_count());

  std::filesystem::create_directories(spec.out_dir);
  const std::string base = spec.out_dir + "/" + spec.case_name;
  crt::write_csv(study.cr, base + "_cr.csv",
                 "CR field; case " + spec.case_name + ", limiter " +
                     spec.limiter + ", viscosity " + spec.viscosity);
  crt::write_csv(study.reconstruction, base + "_reconstruction.csv",
                 "reconstruction; case " + spec.case_name + ", limiter " +
                     spec.limiter + ", viscosity " + spec.viscosity);
  for (std::size_t i = 0; i < study.cr.size(); ++i) {
    const auto& r = study.cr[i];
    std::cout << "h=" << r.h << "  l2=" << r.l2;
    if (i > 0) std::cout << "  rate=" << r.rate;
    std::cout << '\n';
  }
  std::cout << "wrote " << base << "_cr.csv, " << base
            << "_reconstruction.csv\n";
  return 0;
}

int do_audit(const RunSpec& spec) {
  const crt::TestCase tc = crt::find_case(spec.case_name);
  const crt::SchemeConfig config = make_config(spec, tc);
  const crt::TriMesh mesh = load_mesh(spec, tc);
  const crt::TransportProblem problem = crt::to_problem(tc, mesh);

  const crt::RunResult res = crt::run(problem, config);
  const double violation = crt::dmp_audit(res, tc.data_min, tc.data_max);
  std::cout << spec.case_name << " (" << spec.limiter
            << "): bounds [" << tc.data_min << ", " << tc.data_max
            << "], worst violation over " << res.step_count
            << " steps = " << violation << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum-principle-preserving transport solver"};
  app.require_subcommand(1);
  app.set_config("--config")->description(
      "key=value file with flag defaults (flags override)");

  RunSpec spec;
  std::string n_list = "40";
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--case", spec.case_name,
                    "smooth-rotation | swirling | inflow | solid-body | "
                    "non-solenoidal");
    cmd->add_option("--mesh-file", spec.mesh_file,
                    "plain-text mesh file overriding the uniform grid");
    cmd->add_option("--n", n_list, "mesh subdivisions, comma separated");
    cmd->add_option("--limiter", spec.limiter,
                    "galerkin | low-order | greedy | fct-local | fct-global");
    cmd->add_option("--viscosity", spec.viscosity, "minimum | bilinear");
    cmd->add_option("--cfl", spec.cfl, "CFL target (default per case)");
    cmd->add_option("--reduce-factor", spec.reduce_factor,
                    "step reduction factor on CFL violation");
    cmd->add_option("--t-final", spec.t_final, "final time (default per case)");
    cmd->add_option("--out", spec.out_dir, "output directory");
    cmd->add_option("--formats", spec.formats, "csv, vtk")
        ->delimiter(',');
  };
  add_common(app.add_subcommand("run", "single run with field export"));
  add_common(app.add_subcommand("converge", "convergence study over --n"));
  add_common(app.add_subcommand("audit", "discrete maximum principle audit"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::stringstream ss(n_list);
    spec.sizes.clear();
    for (std::string tok; std::getline(ss, tok, ',');)
      if (!tok.empty()) spec.sizes.push_back(std::stoi(tok));
    if (spec.sizes.empty())
      throw std::invalid_argument("--n: no mesh sizes given");

    spec.command = app.get_subcommands().front()->get_name();
    if (spec.command == "run") return do_run(spec);
    if (spec.command == "converge") return do_converge(spec);
    return do_audit(spec);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
