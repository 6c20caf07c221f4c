#include <stdio.h>

void reverse(char *s, int n) {
  int lo = 0;
  int hi = n - 1;
  char t;
  while (lo < hi) {
    t = s[lo];
    s[lo] = s[hi];
    s[hi] = t;
    lo++;
    hi--;
  }
}

int main(void) {
  char word[16];
  const char *src = "decompile";
  int n = 0;
  while (src[n]) {
    word[n] = src[n];
    n++;
  }
  word[n] = 0;
  reverse(word, n);
  printf("%s -> %s\n", src, word);
  return 0;
}
