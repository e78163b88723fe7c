package signals;

class Beacon {
    int led;
    int phase;

    void cycle() {
        blink();
        phase = phase + 1;
    }

    void blink() {
        led--;
        led--;
        led--;
        led--;
    }
}

class Siren {
    int tone;
    int level;

    void alarm() {
        raise();
        level = level * 2;
    }

    void raise() {
        tone = tone + 10;
    }
}
