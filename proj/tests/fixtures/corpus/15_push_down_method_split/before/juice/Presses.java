package juice;

class Press {
    int squeeze(int fruit) {
        return fruit * 3 + 1;
    }
}

class CitrusPress extends Press {
}

class ApplePress extends Press {
}
