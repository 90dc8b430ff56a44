package com.example.shape;

public class Fields {
    public static final int MAX = 100, MIN = 0;
    private double ratio = 0.5;
    private int[] history = new int[16];
    private String first, second;
    volatile boolean dirty;

    public void record(int index, int value) {
        history[index % history.length] = value;
        dirty = true;
    }

    public double scaled(double input) {
        return input * ratio + MIN;
    }
}
