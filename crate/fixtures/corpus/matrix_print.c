#include <stdio.h>

void fill(int m[3][3], int seed) {
  int r;
  int c;
  for (r = 0; r < 3; r++) {
    for (c = 0; c < 3; c++) {
      m[r][c] = (seed + r * 3 + c) % 7;
    }
  }
}

void multiply(int a[3][3], int b[3][3], int out[3][3]) {
  int r;
  int c;
  int k;
  for (r = 0; r < 3; r++) {
    for (c = 0; c < 3; c++) {
      out[r][c] = 0;
      for (k = 0; k < 3; k++) {
        out[r][c] += a[r][k] * b[k][c];
      }
    }
  }
}

void show(int m[3][3]) {
  int r;
  int c;
  for (r = 0; r < 3; r++) {
    for (c = 0; c < 3; c++) {
      printf("%4d", m[r][c]);
    }
    printf("\n");
  }
}

int main(void) {
  int a[3][3];
  int b[3][3];
  int p[3][3];
  fill(a, 1);
  fill(b, 4);
  multiply(a, b, p);
  show(p);
  return 0;
}
