#include <stdio.h>

void bars(const int *counts, int n) {
  int i;
  int j;
  for (i = 0; i < n; i++) {
    printf("%2d |", i);
    for (j = 0; j < counts[i]; j++) {
      printf("*");
    }
    printf("\n");
  }
}

int main(void) {
  int counts[8];
  int i;
  for (i = 0; i < 8; i++) {
    counts[i] = (i * 5 + 3) % 9;
  }
  bars(counts, 8);
  return 0;
}
