package paint;

interface Tool {
    void apply();
}
