// Writes reference laws computed by the direct oracles into a fixture directory.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "bpi/pmf.hpp"
#include "oracles.hpp"

namespace {

bpi::Pmf to_pmf(const bpi::oracle::Masses &m) {
  Eigen::ArrayXd a(static_cast<Eigen::Index>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) a[static_cast<Eigen::Index>(i)] = m[i];
  return bpi::Pmf::from_raw(a);
}

void save(const std::filesystem::path &path, const bpi::Pmf &p) {
  std::ofstream out(path);
  out.precision(17);
  bpi::write_csv(out, p);
}

}  // namespace

int main(int argc, char **argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "tests/fixtures";
  std::filesystem::create_directories(dir);
  std::ofstream manifest(dir / "manifest.csv");
  manifest << "kind;offspring;immigration;n;cutoff;file\n";

  const char *offspring[] = {"bernoulli(q=0.5)", "finite(0:0.6,1:0.2,2:0.2)", "finite(0:0.5,1:0.25,2:0.25)",
                             "finite(0:0.7,3:0.3)"};
  const char *immigration[] = {"finite(0:0.5,1:0.5)", "finite(1:0.4,2:0.3,5:0.3)", "point(2)"};
  const std::size_t cap = 64;
  int index = 0;
  for (const char *o : offspring)
    for (const char *im : immigration) {
      const int n = 2 + 2 * (index % 3);
      const std::string file = "s_" + std::to_string(index) + ".csv";
      save(dir / file, to_pmf(bpi::oracle::joint_dp_total_population(bpi::parse_law(o), bpi::parse_law(im), n, cap)));
      manifest << "total_population;" << o << ';' << im << ';' << n << ';' << cap << ';' << file << '\n';
      ++index;
    }

  const char *dwass[] = {"bernoulli(q=0.5)", "finite(0:0.6,1:0.2,2:0.2)", "poisson(lambda=0.5)", "geom(q=0.6)",
                         "finite(0:0.7,3:0.3)"};
  const std::size_t kmax = 50;
  for (int i = 0; i < 5; ++i) {
    const std::string file = "t_" + std::to_string(i) + ".csv";
    save(dir / file, to_pmf(bpi::oracle::dwass_total_progeny(bpi::parse_law(dwass[i]), kmax)));
    manifest << "total_progeny;" << dwass[i] << ";;0;" << kmax << ';' << file << '\n';
  }
  std::cout << "wrote " << index + 5 << " fixtures to " << dir << '\n';
}
