// Usage: cargo run --example stable_root
//
// The implicit step solves Y² − AY − c = 0. For large negative A the textbook
// formula cancels to zero; the conjugate form does not.

use sipmm::schemes::positive_root;

fn main() {
    let c: f64 = 1e-8;
    for a in [1.0f64, -1.0, -1e4, -1e8, -1e12] {
        let naive = 0.5 * (a + (a * a + 4.0 * c).sqrt());
        let stable = positive_root(a, c);
        println!("A = {a:>8.0e}: naive {naive:.6e}  stable {stable:.6e}  residual {:.1e}", stable * stable - a * stable - c);
    }
}
