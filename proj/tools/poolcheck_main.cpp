#include <cstdio>
int main(){ printf("poolcheck placeholder\n"); return 2; }
