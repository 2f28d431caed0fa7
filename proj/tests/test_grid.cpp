// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "apdiff/grid.hpp"

using namespace apdiff;

TEST(Grid, UnitSquareN99) {
  const Grid g = make_grid({1.0, 2.0, 1.0, 2.0}, 99, 99);
  EXPECT_NEAR(g.dx(), 0.01, 1e-15);
  EXPECT_NEAR(g.dy(), 0.01, 1e-15);
  // Cell-center lattice starts on the domain boundary.
  EXPECT_NEAR(g.xc(-1), 1.0, 1e-15);
  EXPECT_NEAR(g.xc(99), 2.0, 1e-15);
  EXPECT_NEAR(g.x(0), 1.005, 1e-15);
}

TEST(Grid, UnitSquareN199) {
  const Grid g = make_grid({1.0, 2.0, 1.0, 2.0}, 199, 199);
  EXPECT_NEAR(g.h(), 0.005, 1e-15);
}

TEST(Grid, RectangularDomain) {
  const Grid g = make_grid({0.0, 1.0, 0.0, 2.0}, 9, 19);
  EXPECT_NEAR(g.dx(), 0.1, 1e-15);
  EXPECT_NEAR(g.dy(), 0.1, 1e-15);
  EXPECT_NEAR(g.h(), 0.1, 1e-15);
}

TEST(Grid, SquareMeshHasKCells) {
  const Grid g = Grid::square_mesh({1.0, 2.0, 1.0, 2.0}, 100);
  EXPECT_EQ(g.nx(), 99);
  EXPECT_NEAR(g.dx(), 0.01, 1e-15);
}

TEST(Grid, RejectsBadArguments) {
  EXPECT_THROW(make_grid({1.0, 1.0, 0.0, 1.0}, 4, 4), std::invalid_argument);
  EXPECT_THROW(make_grid({0.0, 1.0, 2.0, 1.0}, 4, 4), std::invalid_argument);
  EXPECT_THROW(make_grid({0.0, 1.0, 0.0, 1.0}, 1, 4), std::invalid_argument);
  EXPECT_THROW(make_grid({0.0, 1.0, 0.0, 1.0}, 4, 1), std::invalid_argument);
}

TEST(Grid, IndexSets) {
  const Grid g = make_grid({0.0, 1.0, 0.0, 1.0}, 4, 3);
  EXPECT_EQ(g.interior_node_count(), 20u);
  EXPECT_EQ(g.interior_cell_count(), 12u);
  EXPECT_TRUE(g.is_interior_node(4, 3));
  EXPECT_FALSE(g.is_interior_node(5, 3));
  EXPECT_TRUE(g.is_interior_cell(3, 2));
  EXPECT_FALSE(g.is_interior_cell(4, 2));
  EXPECT_FALSE(g.is_interior_cell(-1, 0));
  EXPECT_EQ(g.cell_unknown(1, 2), 9);
}

TEST(Fields, LatticeDimensions) {
  const Grid g = make_grid({0.0, 1.0, 0.0, 1.0}, 4, 3);
  const NodeField n(g);
  const CellField c(g);
  EXPECT_EQ(n.data().size(), static_cast<std::size_t>(7 * 6));
  EXPECT_EQ(c.data().size(), static_cast<std::size_t>(6 * 5));
}

TEST(Fields, SamplingCoordinates) {
  const Grid g = make_grid({1.0, 2.0, 1.0, 2.0}, 4, 4);
  const NodeField n = sample_node([](double x, double y) { return 10.0 * x + y; }, g);
  EXPECT_DOUBLE_EQ(n(-1, -1), 10.0 * g.x(-1) + g.y(-1));
  EXPECT_DOUBLE_EQ(n(5, 2), 10.0 * g.x(5) + g.y(2));
  const CellField c = sample_cell([](double x, double y) { return x - y; }, g);
  EXPECT_DOUBLE_EQ(c(-1, 4), g.xc(-1) - g.yc(4));
}

TEST(Fields, SamplingRejectsNonFinite) {
  const Grid g = make_grid({1.0, 2.0, 1.0, 2.0}, 4, 4);
  EXPECT_THROW(sample_node([](double x, double) { return x > 1.9 ? NAN : 0.0; }, g),
               SamplingError);
  EXPECT_THROW(sample_cell_vec([](double, double) { return Vec2{INFINITY, 0.0}; }, g),
               SamplingError);
}

TEST(Fields, SetGhostsAndRestrict) {
  const Grid g = make_grid({0.0, 1.0, 0.0, 1.0}, 3, 3);
  CellField c(g, 1.0);
  set_ghosts(c, 5.0);
  EXPECT_EQ(c(-1, 0), 5.0);
  EXPECT_EQ(c(0, 0), 1.0);
  const CellField r = restrict_to_interior(c);
  EXPECT_EQ(r(-1, 0), 0.0);
  EXPECT_EQ(r(3, 3), 0.0);
  EXPECT_EQ(r(2, 2), 1.0);
}

TEST(Norms, ConstantField) {
  const Grid g = make_grid({0.0, 1.0, 0.0, 1.0}, 4, 4);
  const NodeField one(g, 1.0);
  const double m = g.dx() * g.dy();
  EXPECT_NEAR(interior_norm(one, NormKind::L1), 25.0 * m, 1e-15);
  EXPECT_NEAR(interior_norm(one, NormKind::L2), std::sqrt(25.0 * m), 1e-15);
  EXPECT_EQ(interior_norm(one, NormKind::Linf), 1.0);
}

TEST(Norms, GhostsIgnored) {
  const Grid g = make_grid({0.0, 1.0, 0.0, 1.0}, 4, 4);
  NodeField a(g, 2.0);
  const double before = interior_norm(a, NormKind::Linf);
  set_ghosts(a, 100.0);
  EXPECT_EQ(interior_norm(a, NormKind::Linf), before);
  CellField c(g, -3.0);
  set_ghosts(c, 50.0);
  EXPECT_EQ(interior_norm(c, NormKind::Linf), 3.0);
}

TEST(Csv, NodeHeaderAndRows) {
  const Grid g = make_grid({0.0, 1.0, 0.0, 1.0}, 2, 2);
  std::ostringstream os;
  write_csv(os, NodeField(g, 1.0), false);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "i,j,x,y,value");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 1 + 9);
  std::ostringstream oc;
  write_csv(oc, CellField(g, 1.0), true);
  const std::string t = oc.str();
  EXPECT_EQ(t.substr(0, t.find('\n')), "i,j,xc,yc,value");
  EXPECT_EQ(std::count(t.begin(), t.end(), '\n'), 1 + 16);
}
