#include <stdio.h>

int is_odd(int n);

int is_even(int n) {
  if (n == 0) {
    return 1;
  }
  return is_odd(n - 1);
}

int is_odd(int n) {
  if (n == 0) {
    return 0;
  }
  return is_even(n - 1);
}

int main(void) {
  int v;
  for (v = 0; v < 6; v++) {
    printf("%d: %s\n", v, is_even(v) ? "even" : "odd");
  }
  return 0;
}
