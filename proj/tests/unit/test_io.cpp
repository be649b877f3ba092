#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "emi/assembly.hpp"
#include "emi/io.hpp"
#include "oracles.hpp"

using namespace emi;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("emi_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST(Io, MatrixMarketRoundTripSymmetric) {
  const auto sys = assemble_system(build_grid({8}), {0.1});
  const auto d = scratch_dir("mm");
  io::write_matrix_market(d / "A.mtx", sys.matrix);
  const auto back = io::read_matrix_market(d / "A.mtx");
  EXPECT_TRUE(back.symmetric());
  EXPECT_EQ(back.rows(), sys.matrix.rows());
  EXPECT_EQ(back.nnz(), sys.matrix.nnz());
  EXPECT_LT((oracle::to_eigen(back) - oracle::to_eigen(sys.matrix)).cwiseAbs().maxCoeff(), 1e-11);
  const std::string text = io::to_matrix_market(sys.matrix);
  EXPECT_EQ(text.rfind("%%MatrixMarket matrix coordinate real symmetric", 0), 0u);
}

TEST(Io, MatrixMarketGeneral) {
  const auto a = SparseMatrix::from_triplets(2, 3, {{0, 2, 1.5}, {1, 0, -2.0}});
  const auto back = io::parse_matrix_market(io::to_matrix_market(a));
  EXPECT_FALSE(back.symmetric());
  EXPECT_EQ(back.at(0, 2), 1.5);
  EXPECT_EQ(back.at(1, 0), -2.0);
  EXPECT_THROW(io::parse_matrix_market("garbage\n"), std::runtime_error);
}

TEST(Io, FormatNumber) {
  EXPECT_EQ(io::format_number(0.5), "0.5");
  EXPECT_EQ(io::format_number(35), "35");
  EXPECT_EQ(io::format_number(1e-3), "0.001");
  EXPECT_EQ(io::format_number(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(io::format_number(1e-20), "1e-20");
}

TEST(Io, CsvColumnRoundTrip) {
  const auto d = scratch_dir("csv");
  const std::vector<double> v{1.0, 0.25, -3.5e-7};
  io::write_csv_column(d / "sub" / "v.csv", "eig", v);
  const auto back = io::read_csv_column(d / "sub" / "v.csv");
  ASSERT_EQ(back.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(back[i], v[i]);
  std::ifstream in(d / "sub" / "v.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "eig");
}

TEST(Io, CsvTable) {
  io::CsvTable t({"a", "b"});
  t.add_row({"1", "x"});
  t.add_row({"2", "y"});
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.str(), "a,b\n1,x\n2,y\n");
  EXPECT_THROW(t.add_row({"3"}), std::invalid_argument);
}

TEST(Io, AtomicWriteReplaces) {
  const auto d = scratch_dir("atomic");
  io::write_atomic(d / "f.txt", "one");
  io::write_atomic(d / "f.txt", "two");
  std::ifstream in(d / "f.txt");
  std::string s;
  std::getline(in, s);
  EXPECT_EQ(s, "two");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(d)) ++files;
  EXPECT_EQ(files, 1u);
}
