#include <stdio.h>

int find(const int *v, int n, int key) {
  int lo = 0;
  int hi = n - 1;
  int mid;
  while (lo <= hi) {
    mid = (lo + hi) / 2;
    if (v[mid] == key) {
      return mid;
    }
    if (v[mid] < key) {
      lo = mid + 1;
    } else {
      hi = mid - 1;
    }
  }
  return -1;
}

int main(void) {
  int v[10];
  int i;
  for (i = 0; i < 10; i++) {
    v[i] = i * i;
  }
  printf("%d %d %d\n", find(v, 10, 49), find(v, 10, 50), find(v, 10, 0));
  return 0;
}
