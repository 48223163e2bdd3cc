use std::str::FromStr;

/// Inclusive integer range written `start:stop` (or a single value).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub start: usize,
    pub stop: usize,
}

impl IntRange {
    pub fn values(&self) -> Vec<usize> {
        (self.start..=self.stop).collect()
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad integer {t:?}: {e}"))
        };
        let (start, stop) = match s.split_once(':') {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if start > stop {
            return Err(format!("range start {start} exceeds stop {stop}"));
        }
        Ok(Self { start, stop })
    }
}

/// `steps` evenly spaced reals from `start` to `stop`, both included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FloatSweep {
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl FloatSweep {
    pub fn values(&self) -> Vec<f64> {
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|k| {
                if k + 1 == self.steps {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * k as f64 / last
                }
            })
            .collect()
    }
}

impl FromStr for FloatSweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(format!("expected start:stop:steps, got {s:?}"));
        };
        let real = |t: &str| {
            t.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("bad number {t:?}"))
        };
        let (start, stop) = (real(a)?, real(b)?);
        let steps = n
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("bad step count {n:?}: {e}"))?;
        if start >= stop {
            return Err(format!("sweep start {start} must be below stop {stop}"));
        }
        if steps < 2 {
            return Err(format!("sweep needs at least 2 steps, got {steps}"));
        }
        Ok(Self { start, stop, steps })
    }
}
