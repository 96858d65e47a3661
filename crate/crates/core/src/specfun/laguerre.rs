/// Associated Laguerre polynomial L_n^(α)(x) by the three-term recurrence
/// (k+1) L_{k+1} = (2k+1+α-x) L_k - (k+α) L_{k-1}.
pub fn laguerre(n: u32, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// d/dx L_n^(α)(x) = -L_{n-1}^(α+1)(x).
pub fn laguerre_derivative(n: u32, alpha: f64, x: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        -laguerre(n - 1, alpha + 1.0, x)
    }
}
