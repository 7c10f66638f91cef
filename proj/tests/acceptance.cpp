#include <cstdio>
int main(){ puts("acceptance: pending"); return 1; }
