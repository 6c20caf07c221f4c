#include <stdio.h>

int sieve(char *marks, int limit) {
  int count = 0;
  int p;
  int m;
  for (p = 0; p < limit; p++) {
    marks[p] = 1;
  }
  marks[0] = 0;
  marks[1] = 0;
  for (p = 2; p * p < limit; p++) {
    if (marks[p]) {
      for (m = p * p; m < limit; m += p) {
        marks[m] = 0;
      }
    }
  }
  for (p = 0; p < limit; p++) {
    count += marks[p];
  }
  return count;
}

int main(void) {
  char marks[100];
  int q;
  printf("primes below 100: %d\n", sieve(marks, 100));
  for (q = 90; q < 100; q++) {
    if (marks[q]) {
      printf("%d is prime\n", q);
    }
  }
  return 0;
}
