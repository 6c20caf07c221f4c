#include <stdio.h>

void fizz(int limit) {
  int i;
  for (i = 1; i <= limit; i++) {
    if (i % 15 == 0) {
      printf("FizzBuzz\n");
    } else if (i % 3 == 0) {
      printf("Fizz\n");
    } else if (i % 5 == 0) {
      printf("Buzz\n");
    } else {
      printf("%d\n", i);
    }
  }
}

int main(void) {
  fizz(20);
  return 0;
}
