#include <stdio.h>

int main(void) {
  int ch;
  int count = 0;
  while ((ch = getchar()) != EOF) {
    putchar(ch);
    count++;
  }
  printf("\n[%d bytes]\n", count);
  return 0;
}
