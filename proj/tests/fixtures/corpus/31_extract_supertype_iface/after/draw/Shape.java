package draw;

class Shape implements Sized {
    int w;
    int h;

    int area() {
        return w * h;
    }
}
