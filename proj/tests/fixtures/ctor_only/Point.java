public class Point {
    private final int x;

    public Point(int x) {
        this.x = x;
    }
}
