//! Small integer helpers for group orders.

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors in increasing order.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: u64, p: u64) -> u64 {
    let mut acc = 1;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        acc *= p;
    }
    acc
}

/// `log_p(n)` when `n` is a power of `p`.
pub fn exact_log(mut n: u64, p: u64) -> Option<u32> {
    let mut k = 0;
    while n > 1 {
        if !n.is_multiple_of(p) {
            return None;
        }
        n /= p;
        k += 1;
    }
    (n == 1).then_some(k)
}

pub fn is_p_power(n: u64, p: u64) -> bool {
    exact_log(n, p).is_some()
}

/// The unique prime dividing `n`, when `n > 1` is a prime power.
pub fn prime_of_power(n: u64) -> Option<u64> {
    match prime_divisors(n).as_slice() {
        [p] => Some(*p),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basics() {
        assert_eq!(prime_divisors(360), vec![2, 3, 5]);
        assert_eq!(prime_divisors(1), Vec::<u64>::new());
        assert_eq!(p_part(360, 2), 8);
        assert_eq!(p_part(360, 7), 1);
        assert_eq!(exact_log(81, 3), Some(4));
        assert_eq!(exact_log(1, 5), Some(0));
        assert_eq!(exact_log(12, 2), None);
        assert!(is_prime(11) && !is_prime(1) && !is_prime(9));
        assert_eq!(prime_of_power(32), Some(2));
        assert_eq!(prime_of_power(12), None);
    }
}
