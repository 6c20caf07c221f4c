#include <stdio.h>

int triples(int limit) {
  int a;
  int b;
  int c;
  int found = 0;
  for (a = 1; a < limit; a++) {
    for (b = a; b < limit; b++) {
      for (c = b; c < limit; c++) {
        if (a * a + b * b == c * c) {
          printf("(%d, %d, %d)\n", a, b, c);
          found++;
        }
      }
    }
  }
  return found;
}

int main(void) {
  printf("%d triples\n", triples(20));
  return 0;
}
