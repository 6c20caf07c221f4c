#include <stdio.h>

void pascal(int rows) {
  int line[16];
  int r;
  int c;
  for (r = 0; r < rows; r++) {
    line[r] = 1;
    for (c = r - 1; c > 0; c--) {
      line[c] = line[c] + line[c - 1];
    }
    for (c = 0; c <= r; c++) {
      printf("%d ", line[c]);
    }
    printf("\n");
  }
}

int main(void) {
  pascal(7);
  return 0;
}
