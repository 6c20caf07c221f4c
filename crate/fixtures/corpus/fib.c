#include <stdio.h>

int fib_rec(int n) {
  if (n < 2) {
    return n;
  }
  return fib_rec(n - 1) + fib_rec(n - 2);
}

int fib_iter(int n) {
  int a = 0;
  int b = 1;
  int t;
  int i;
  for (i = 0; i < n; i++) {
    t = a + b;
    a = b;
    b = t;
  }
  return a;
}

int main(void) {
  int n;
  for (n = 0; n < 12; n++) {
    printf("%d %d\n", fib_rec(n), fib_iter(n));
  }
  return 0;
}
