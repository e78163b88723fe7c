package relay;

class Hub {
    int ticks;

    int forward(int frame) {
        return frame ^ 255;
    }

    void sync() {
        ticks++;
        ticks++;
        ticks++;
        ticks++;
    }
}

class Node {
    int ticks;

    void idle() {
    }
}
