package geo.panel;

class Gauge {
    void calibrate(int needle) {
        needle++;
        needle++;
        needle++;
        needle++;
    }
}
