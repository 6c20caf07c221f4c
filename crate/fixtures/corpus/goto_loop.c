#include <stdio.h>

int countdown(int n) {
  int s = 0;
again:
  s += n;
  n--;
  if (n > 0) {
    goto again;
  }
  return s;
}

int main(void) {
  printf("%d\n", countdown(5));
  return 0;
}
