#include "fpc/types.hpp"

namespace fpc {

char to_char(ClassLabel label) {
  switch (label) {
    case ClassLabel::A: return 'A';
    case ClassLabel::L: return 'L';
    case ClassLabel::R: return 'R';
    case ClassLabel::W: return 'W';
  }
  return '?';
}

const char* to_string(ClassLabel label) {
  switch (label) {
    case ClassLabel::A: return "A";
    case ClassLabel::L: return "L";
    case ClassLabel::R: return "R";
    case ClassLabel::W: return "W";
  }
  return "?";
}

ClassLabel label_from_char(char c) {
  switch (c) {
    case 'A': case 'a': return ClassLabel::A;
    case 'L': case 'l': return ClassLabel::L;
    case 'R': case 'r': return ClassLabel::R;
    case 'W': case 'w': return ClassLabel::W;
  }
  throw ParseError(std::string("unknown class label '") + c + "' (expected one of A,L,R,W)");
}

OrientationField OrientationField::make(int rows, int cols) {
  if (rows < 1 || cols < 1) throw DimError("orientation field dims must be >= 1");
  OrientationField f;
  f.rows = rows;
  f.cols = cols;
  f.angles.assign(static_cast<std::size_t>(rows) * cols, 0.0);
  f.valid.assign(static_cast<std::size_t>(rows) * cols, 1);
  return f;
}

}  // namespace fpc
