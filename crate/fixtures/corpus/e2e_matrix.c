int trace_product(int size) {
  int a[4][4];
  int b[4][4];
  int r;
  int c;
  int k;
  int acc;
  int tr = 0;
  for (r = 0; r < size; r++) {
    for (c = 0; c < size; c++) {
      a[r][c] = r + c;
      b[r][c] = r - c;
    }
  }
  for (r = 0; r < size; r++) {
    acc = 0;
    for (k = 0; k < size; k++) {
      acc += a[r][k] * b[k][r];
    }
    tr += acc;
  }
  return tr;
}

int main(void) {
  return trace_product(4) & 255;
}
