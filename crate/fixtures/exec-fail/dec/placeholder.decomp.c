#include <stdio.h>

int main(void) {
  printf(STR_1024);
  return 0;
}
