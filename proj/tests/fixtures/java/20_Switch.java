package com.example.flow;

public class SwitchBox {
    public int daysIn(int month, boolean leap) {
        switch (month) {
            case 2:
                return leap ? 29 : 28;
            case 4:
            case 6:
            case 9:
            case 11:
                return 30;
            default:
                return 31;
        }
    }

    public String sizeOf(int n) {
        switch (Integer.signum(n)) {
            case -1 -> { return "negative"; }
            case 0 -> { return "zero"; }
            default -> { return "positive"; }
        }
    }
}
