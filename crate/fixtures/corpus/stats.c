#include <stdio.h>

int mean(const int *v, int n) {
  int s = 0;
  int i;
  for (i = 0; i < n; i++) {
    s += v[i];
  }
  return s / n;
}

int spread(const int *v, int n) {
  int lo = v[0];
  int hi = v[0];
  int i = 1;
  while (i < n) {
    if (v[i] < lo) {
      lo = v[i];
    }
    if (v[i] > hi) {
      hi = v[i];
    }
    i++;
  }
  return hi - lo;
}

int main(void) {
  int v[7];
  int i;
  for (i = 0; i < 7; i++) {
    v[i] = (i * 13 + 5) % 17;
  }
  printf("mean %d spread %d\n", mean(v, 7), spread(v, 7));
  return 0;
}
