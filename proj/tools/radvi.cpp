// Placeholder main, replaced once the experiment engine lands.
int main() { return 0; }
