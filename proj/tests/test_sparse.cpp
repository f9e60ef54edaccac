// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>
#include <cstdio>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "ppg/sparse.hpp"

namespace {

std::string temp_path(const char* stem) {
  return std::string("ppg_test_") + stem;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("assemble sorts rows and sums duplicates") {
  auto A = ppg::assemble(3, {{2, 0, 1.0}, {0, 1, 2.0}, {0, 1, 3.0},
                             {1, 1, 4.0}, {0, 0, 0.5}});
  REQUIRE(A.n == 3);
  REQUIRE(A.nnz() == 4);
  REQUIRE(A.row_ptr == std::vector<int>{0, 2, 3, 4});
  REQUIRE(A.col_idx == std::vector<int>{0, 1, 1, 0});
  REQUIRE(A.val[0] == 0.5);
  REQUIRE(A.val[1] == 5.0);  // 2 + 3 summed
  REQUIRE(A.val[2] == 4.0);
  REQUIRE(A.val[3] == 1.0);
  REQUIRE_THROWS_AS(ppg::assemble(2, {{0, 2, 1.0}}), std::invalid_argument);
  REQUIRE_THROWS_AS(ppg::assemble(0, {}), std::invalid_argument);
}

TEST_CASE("matvec matches a dense reference and counts one mvp") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int n = 40;
  std::vector<std::tuple<int, int, double>> e;
  for (int i = 0; i < n; ++i) {
    e.emplace_back(i, i, 2.0 + u(rng));
    e.emplace_back(i, (i * 7 + 3) % n, u(rng));
  }
  auto A = ppg::assemble(n, e);
  auto Ad = oracle::dense_from_sparse(A);
  ppg::Vec v(n);
  for (double& x : v) x = u(rng);
  ppg::OpCounter ctr;
  auto w = ppg::matvec(A, v, ctr);
  REQUIRE(ctr.mvps == 1);
  REQUIRE(ctr.daxpys == 0);
  auto wd = oracle::dense_matvec(Ad, v);
  for (int i = 0; i < n; ++i) REQUIRE(w[i] == Catch::Approx(wd[i]).margin(1e-14));

  ppg::Vec bad(n + 1, 0.0);
  REQUIRE_THROWS_AS(ppg::matvec(A, bad, ctr), std::invalid_argument);
}

TEST_CASE("inf_norm is the max absolute row sum") {
  auto A = ppg::assemble(2, {{0, 0, 1.0}, {0, 1, -3.0}, {1, 1, 2.0}});
  REQUIRE(A.inf_norm() == 4.0);
}

TEST_CASE("diagonal power generator entries are i^p/n") {
  auto A = ppg::gen_diag_power(5, 2.0);
  REQUIRE(A.nnz() == 5);
  for (int i = 0; i < 5; ++i)
    REQUIRE(A.val[i] == Catch::Approx((i + 1.0) * (i + 1.0) / 5.0));

  auto B = ppg::gen_bidiag_power(4, 1.0, 0.25);
  REQUIRE(B.nnz() == 7);
  ppg::OpCounter ctr;
  ppg::Vec e2(4, 0.0);
  e2[1] = 1.0;
  auto w = ppg::matvec(B, e2, ctr);
  REQUIRE(w[0] == 0.25);            // superdiagonal
  REQUIRE(w[1] == Catch::Approx(0.5));  // 2^1/4
}

TEST_CASE("fourth-order grid generator stencil values") {
  const int nx = 3, ny = 3;
  auto A = ppg::gen_biharmonic(nx, ny);
  REQUIRE(A.n == 9);
  const double h = 0.25, h4 = h * h * h * h, h3 = h * h * h;
  auto entry = [&](int r, int c) {
    for (int k = A.row_ptr[r]; k < A.row_ptr[r + 1]; ++k)
      if (A.col_idx[k] == c) return A.val[k];
    return 0.0;
  };
  const int ctr = 4;  // middle of the 3x3 grid
  // diagonal: -6/h4 from each axis; no odd-derivative part at offset 0
  REQUIRE(entry(ctr, ctr) == Catch::Approx(-12.0 / h4));
  // x-neighbors at +-1: 4/h4 -+ 1/h3 (third difference coefficient -+2/(2h3))
  REQUIRE(entry(ctr, ctr + 1) == Catch::Approx(4.0 / h4 - 1.0 / h3));
  REQUIRE(entry(ctr, ctr - 1) == Catch::Approx(4.0 / h4 + 1.0 / h3));
  // y-neighbors carry no third-difference term
  REQUIRE(entry(ctr, ctr + 3) == Catch::Approx(4.0 / h4));
  REQUIRE(entry(ctr, ctr - 3) == Catch::Approx(4.0 / h4));
}

TEST_CASE("larger grid interior rows have the nine-point stencil") {
  auto A = ppg::gen_biharmonic(7, 7);
  const int row = 3 * 7 + 3;  // fully interior
  REQUIRE(A.row_ptr[row + 1] - A.row_ptr[row] == 9);
}

TEST_CASE("matrix market writer and reader round-trip") {
  auto A = ppg::gen_bidiag_power(6, 1.5, -0.3);
  const auto path = temp_path("roundtrip.mtx");
  ppg::write_matrix_market(A, path);
  auto B = ppg::read_matrix_market(path);
  REQUIRE(B.n == A.n);
  REQUIRE(B.row_ptr == A.row_ptr);
  REQUIRE(B.col_idx == A.col_idx);
  for (std::size_t k = 0; k < A.val.size(); ++k)
    REQUIRE(B.val[k] == A.val[k]);
  std::remove(path.c_str());
}

TEST_CASE("symmetric coordinate files expand to full storage") {
  const auto path = temp_path("sym.mtx");
  write_file(path,
             "%%MatrixMarket matrix coordinate real symmetric\n"
             "% comment line\n"
             "3 3 4\n"
             "1 1 2.0\n"
             "2 1 -1.0\n"
             "2 2 2.0\n"
             "3 3 2.0\n");
  auto A = ppg::read_matrix_market(path);
  REQUIRE(A.n == 3);
  REQUIRE(A.nnz() == 5);  // off-diagonal mirrored
  REQUIRE(A.symmetric_input);
  ppg::OpCounter ctr;
  ppg::Vec e1{1.0, 0.0, 0.0};
  auto w = ppg::matvec(A, e1, ctr);
  REQUIRE(w[1] == -1.0);  // mirrored entry present
  std::remove(path.c_str());
}

TEST_CASE("matrix market reader rejects what it cannot represent") {
  const auto path = temp_path("bad.mtx");
  write_file(path, "%%MatrixMarket matrix coordinate complex general\n"
                   "2 2 1\n1 1 1.0 0.0\n");
  REQUIRE_THROWS_WITH(ppg::read_matrix_market(path),
                      Catch::Matchers::ContainsSubstring("complex"));
  write_file(path, "not a header\n2 2 1\n1 1 1.0\n");
  REQUIRE_THROWS_WITH(ppg::read_matrix_market(path),
                      Catch::Matchers::ContainsSubstring("malformed header"));
  write_file(path, "%%MatrixMarket matrix coordinate real general\n"
                   "2 3 1\n1 1 1.0\n");
  REQUIRE_THROWS_WITH(ppg::read_matrix_market(path),
                      Catch::Matchers::ContainsSubstring("not square"));
  write_file(path, "%%MatrixMarket matrix coordinate real general\n"
                   "2 2 2\n1 1 1.0\n");
  REQUIRE_THROWS_WITH(ppg::read_matrix_market(path),
                      Catch::Matchers::ContainsSubstring("truncated"));
  REQUIRE_THROWS_WITH(ppg::read_matrix_market("no_such_file.mtx"),
                      Catch::Matchers::ContainsSubstring("cannot open"));
  std::remove(path.c_str());
}

TEST_CASE("vector reader accepts plain lists and dense array files") {
  const auto path = temp_path("rhs.txt");
  write_file(path, "1.5\n-2\n0.25\n");
  auto v = ppg::read_vector(path);
  REQUIRE(v == ppg::Vec{1.5, -2.0, 0.25});

  write_file(path,
             "%%MatrixMarket matrix array real general\n"
             "% rhs\n"
             "3 1\n"
             "1.0\n2.0\n3.0\n");
  auto w = ppg::read_vector(path);
  REQUIRE(w == ppg::Vec{1.0, 2.0, 3.0});

  write_file(path, "%%MatrixMarket matrix array real general\n3 2\n");
  REQUIRE_THROWS_WITH(ppg::read_vector(path),
                      Catch::Matchers::ContainsSubstring("single column"));
  std::remove(path.c_str());
}
