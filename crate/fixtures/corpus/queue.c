#include <stdio.h>

struct ring {
  int items[8];
  int head;
  int size;
};

void push(struct ring *q, int v) {
  if (q->size < 8) {
    q->items[(q->head + q->size) % 8] = v;
    q->size++;
  }
}

int pop(struct ring *q) {
  int v = q->items[q->head];
  q->head = (q->head + 1) % 8;
  q->size--;
  return v;
}

int main(void) {
  struct ring q;
  int i;
  int total = 0;
  q.head = 0;
  q.size = 0;
  for (i = 0; i < 12; i++) {
    push(&q, i * i);
    if (i % 3 == 2) {
      total += pop(&q);
    }
  }
  while (q.size > 0) {
    total += pop(&q);
  }
  printf("total %d\n", total);
  return 0;
}
