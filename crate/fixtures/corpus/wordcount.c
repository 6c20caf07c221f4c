#include <stdio.h>

int words(const char *s) {
  int n = 0;
  int inside = 0;
  int i;
  for (i = 0; s[i]; i++) {
    if (s[i] == ' ' || s[i] == '\n' || s[i] == '\t') {
      inside = 0;
    } else if (!inside) {
      inside = 1;
      n++;
    }
  }
  return n;
}

int lines(const char *s) {
  int n = 0;
  while (*s) {
    if (*s == '\n') {
      n++;
    }
    s++;
  }
  return n;
}

int main(void) {
  const char *text = "one two\nthree \"four\"\n\tfive\n";
  printf("words=%d lines=%d\n", words(text), lines(text));
  return 0;
}
