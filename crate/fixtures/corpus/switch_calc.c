#include <stdio.h>

int apply(const char *ops, int start) {
  int acc = start;
  int i = 0;
  while (ops[i]) {
    switch (ops[i]) {
    case '+':
      acc += 3;
      break;
    case '-':
      acc -= 1;
      break;
    case '*':
      acc *= 2;
      break;
    default:
      acc = acc;
    }
    i++;
  }
  return acc;
}

int main(void) {
  printf("%d\n", apply("++*-*+", 1));
  printf("%d\n", apply("--x*", 10));
  return 0;
}
