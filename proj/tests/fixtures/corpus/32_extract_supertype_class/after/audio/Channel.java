package audio;

class Channel {
    int gain;

    int amplify(int sample) {
        return sample * gain;
    }
}
