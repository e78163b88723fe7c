package logistics.flow;

class Shipment {
    int mass;

    int freightCost(int rate) {
        return mass * rate + 25;
    }

    boolean heavy() {
        return mass > 1000;
    }
}
