int gcd(int a, int b) {
  int t;
  while (b != 0) {
    t = a % b;
    a = b;
    b = t;
  }
  return a;
}

int digits(int v) {
  int n = 0;
  do {
    n++;
    v = v / 10;
  } while (v != 0);
  return n;
}

int main(void) {
  int x = 0;
  int i;
  for (i = 1; i < 20; i++) {
    x += gcd(i * 6, 84) + digits(i * 123);
  }
  return x;
}
