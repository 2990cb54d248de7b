#include <doctest.h>

#include <sstream>

#include "fovexp/matrix_market.hpp"
#include "test_support.hpp"

using namespace fovexp;

TEST_CASE("matrix market round trip is exact") {
  MatrixXd a = test::random_matrix(7, 7, 3);
  for (Index i = 0; i < 7; ++i)
    for (Index j = 0; j < 7; ++j)
      if ((i + 2 * j) % 3 == 0) a(i, j) = 0.0;
  a(1, 2) = 1.0 / 3.0;
  a(4, 4) = -1e-300;
  const SparseMatrixd s = a.sparseView();
  std::stringstream buf;
  io::write_matrix_market(buf, s);
  const SparseMatrixd back = io::read_matrix_market(buf);
  CHECK(back.rows() == 7);
  CHECK(back.cols() == 7);
  CHECK(back.nonZeros() == s.nonZeros());
  CHECK((MatrixXd(back) - a).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("symmetric files expand the mirror entries") {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate real symmetric\n"
      "% comment\n"
      "3 3 4\n"
      "1 1 2.0\n"
      "2 1 -1.0\n"
      "3 2 -1.0\n"
      "3 3 2.0\n");
  const MatrixXd a = io::read_matrix_market(in);
  CHECK(a(0, 1) == -1.0);
  CHECK(a(1, 0) == -1.0);
  CHECK(a(1, 2) == -1.0);
  CHECK(a(2, 1) == -1.0);
  CHECK(a(1, 1) == 0.0);
  CHECK(a(2, 2) == 2.0);
}

TEST_CASE("duplicates sum and integer fields parse") {
  std::istringstream in(
      "%%MatrixMarket matrix coordinate integer general\n"
      "2 2 3\n"
      "1 1 1\n"
      "1 1 2\n"
      "2 2 5\n");
  const MatrixXd a = io::read_matrix_market(in);
  CHECK(a(0, 0) == 3.0);
  CHECK(a(1, 1) == 5.0);
}

TEST_CASE("malformed input raises Io") {
  const char* cases[] = {
      "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n",
      "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n",
      "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n",
      "not a header\n",
  };
  for (const char* text : cases) {
    std::istringstream in(text);
    try {
      (void)io::read_matrix_market(in);
      FAIL("expected Io for: " << text);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Io);
    }
  }
}

TEST_CASE("vector text round trip") {
  const VectorXd v = test::random_vector(9, 12);
  std::stringstream buf;
  buf << "# header\n";
  io::write_vector(buf, v);
  const VectorXd back = io::read_vector(buf);
  CHECK(back == v);
}
