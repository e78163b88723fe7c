package cargo;

class Vehicle {
}

class Trailer extends Vehicle {
    int axles;

    int loadRating() {
        int rated = axles * 9000 + axles * 120;
        return rated;
    }

    void upgrade() {
        axles = axles + 1;
    }
}
