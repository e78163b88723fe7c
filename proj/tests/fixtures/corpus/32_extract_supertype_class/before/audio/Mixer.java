package audio;

class Mixer {
    int gain;

    int amplify(int sample) {
        return sample * gain;
    }

    void mute() {
        gain = 0;
    }
}
