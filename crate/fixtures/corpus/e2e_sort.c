void swap(int *p, int *q) {
  int t = *p;
  *p = *q;
  *q = t;
}

void bubble(int *v, int n) {
  int i;
  int j;
  for (i = 0; i < n - 1; i++) {
    for (j = 0; j < n - 1 - i; j++) {
      if (v[j] > v[j + 1]) {
        swap(&v[j], &v[j + 1]);
      }
    }
  }
}

int main(void) {
  int data[6];
  int i;
  for (i = 0; i < 6; i++) {
    data[i] = (i * 37) % 11;
  }
  bubble(data, 6);
  return data[0] + data[5] * 16;
}
