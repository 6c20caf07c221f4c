#include <stdio.h>

struct point {
  int x;
  int y;
};

int manhattan(struct point a, struct point b) {
  int dx = a.x - b.x;
  int dy = a.y - b.y;
  if (dx < 0) {
    dx = -dx;
  }
  if (dy < 0) {
    dy = -dy;
  }
  return dx + dy;
}

int main(void) {
  struct point pts[5];
  int i;
  int j;
  int best = 1000;
  for (i = 0; i < 5; i++) {
    pts[i].x = i * 3 % 5;
    pts[i].y = i * 7 % 4;
  }
  for (i = 0; i < 5; i++) {
    for (j = i + 1; j < 5; j++) {
      if (manhattan(pts[i], pts[j]) < best) {
        best = manhattan(pts[i], pts[j]);
      }
    }
  }
  printf("closest pair distance %d\n", best);
  return 0;
}
