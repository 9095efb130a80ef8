#include "dnstab/solver/dump.hpp"

#include <fstream>
#include <iomanip>

#include "dnstab/errors.hpp"

namespace dnstab::solver {

void write_trajectory(std::ostream& out, const DiscreteSolution& sol, Field which,
                      const std::vector<std::string>& comments) {
  const auto& traj = trajectory(sol, which);
  for (const auto& c : comments) out << "# " << c << '\n';
  out << std::setprecision(17);
  out << 't';
  for (double x : sol.mesh.nodes()) out << ' ' << x;
  out << '\n';
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << sol.grid.t(k);
    for (double v : traj[k]) out << ' ' << v;
    out << '\n';
  }
}

std::vector<std::filesystem::path> write_all_trajectories(
    const std::filesystem::path& dir, const std::string& stem, const DiscreteSolution& sol,
    const std::vector<std::string>& comments) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (Field f : {Field::kU, Field::kBeta, Field::kZeta, Field::kNu}) {
    const auto path = dir / (stem + "_" + to_string(f) + ".txt");
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write " + path.string());
    write_trajectory(out, sol, f, comments);
    written.push_back(path);
  }
  return written;
}

}  // namespace dnstab::solver
