package shop;

public interface Pricing {
    int price(String sku);

    default int priceOf(String sku, int qty) {
        try {
            return price(sku) * qty;
        } catch (RuntimeException e) {
            return -1;
        }
    }

    static String label(int cents) {
        switch (cents % 2) {
            case 0:
                return "even";
            default:
                return "odd";
        }
    }
}
