#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "systolic/errors.hpp"
#include "systolic/metric_field.hpp"

namespace systolic {

namespace {

constexpr const char* kMagic = "SYSTOLIC-GRID";

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(std::string("grid file: missing ") + what + " line");
  }
  return line;
}

}  // namespace

void write_grid(std::ostream& out, const ScalarField& field) {
  const Vec2 b1 = field.lattice().b1();
  const Vec2 b2 = field.lattice().b2();
  out << std::setprecision(17);
  out << kMagic << " 1\n";
  out << "lattice " << b1.x << ' ' << b1.y << ' ' << b2.x << ' ' << b2.y << '\n';
  out << "dims " << field.nu() << ' ' << field.nv() << '\n';
  for (int i = 0; i < field.nu(); ++i) {
    for (int j = 0; j < field.nv(); ++j) {
      out << field(i, j) << (j + 1 == field.nv() ? '\n' : ' ');
    }
  }
}

ScalarField read_grid(std::istream& in) {
  {
    std::istringstream header(next_line(in, "header"));
    std::string magic;
    int version = 0;
    if (!(header >> magic >> version) || magic != kMagic || version != 1) {
      throw ParseError("grid file: expected 'SYSTOLIC-GRID 1'");
    }
  }
  Vec2 b1;
  Vec2 b2;
  {
    std::istringstream ls(next_line(in, "lattice"));
    std::string key;
    if (!(ls >> key >> b1.x >> b1.y >> b2.x >> b2.y) || key != "lattice") {
      throw ParseError("grid file: expected 'lattice b1x b1y b2x b2y'");
    }
  }
  int nu = 0;
  int nv = 0;
  {
    std::istringstream ds(next_line(in, "dims"));
    std::string key;
    if (!(ds >> key >> nu >> nv) || key != "dims" || nu <= 0 || nv <= 0) {
      throw ParseError("grid file: expected 'dims nu nv'");
    }
  }
  std::vector<double> values(static_cast<std::size_t>(nu) * static_cast<std::size_t>(nv));
  for (double& v : values) {
    if (!(in >> v)) {
      throw ParseError("grid file: fewer than nu*nv values");
    }
  }
  double extra = 0.0;
  if (in >> extra) {
    throw ParseError("grid file: more than nu*nv values");
  }
  return {Lattice2D(b1, b2), nu, nv, std::move(values)};
}

void write_grid_file(const std::string& path, const ScalarField& field) {
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot open " + path + " for writing");
  }
  write_grid(out, field);
}

ScalarField read_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open grid file " + path);
  }
  return read_grid(in);
}

}  // namespace systolic
