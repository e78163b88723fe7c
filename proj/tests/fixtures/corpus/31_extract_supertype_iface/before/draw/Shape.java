package draw;

class Shape {
    int w;
    int h;

    int area() {
        return w * h;
    }
}
