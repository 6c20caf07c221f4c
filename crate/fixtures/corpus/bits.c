#include <stdio.h>

int popcount(unsigned int v) {
  int n = 0;
  do {
    n += v & 1;
    v >>= 1;
  } while (v);
  return n;
}

void table(int bits) {
  int row;
  int col;
  for (row = 0; row < bits; row++) {
    for (col = 0; col < bits; col++) {
      printf("%d", popcount(row * bits + col));
    }
    printf("\n");
  }
}

int main(void) {
  table(4);
  printf("%d\n", popcount(0xF0F0u));
  return 0;
}
