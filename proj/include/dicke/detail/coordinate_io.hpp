#pragma once

#include <sstream>
#include <string>

#include "dicke/detail/numio.hpp"

namespace dicke {

inline void write_coordinate(const SparseSymmetricMatrix& m, std::ostream& os) {
  os << m.dim << ' ' << m.entries.size() << '\n';
  for (const auto& e : m.entries)
    os << e.row << ' ' << e.col << ' ' << detail::format_double(e.value) << '\n';
}

inline SparseSymmetricMatrix read_coordinate(std::istream& is) {
  SparseSymmetricMatrix m;
  std::size_t nnz = 0;
  if (!(is >> m.dim >> nnz)) throw std::runtime_error("read_coordinate: bad header");
  m.entries.reserve(nnz);
  for (std::size_t i = 0; i < nnz; ++i) {
    SparseSymmetricMatrix::Entry e{};
    std::string value;
    if (!(is >> e.row >> e.col >> value))
      throw std::runtime_error("read_coordinate: truncated entry list");
    if (e.row < 0 || e.col >= m.dim || e.row > e.col)
      throw std::runtime_error("read_coordinate: entry outside upper triangle");
    e.value = detail::parse_double(value);
    m.entries.push_back(e);
  }
  return m;
}

}  // namespace dicke
