use std::io::{Read, Write};

use super::{check_prime, LinalgError, ModMatrix};

impl ModMatrix {
    /// Writes `p, n_rows, n_cols` as little-endian `u64`, then the entries as little-endian `u32`.
    pub fn write_dump<W: Write>(&self, mut w: W) -> Result<(), LinalgError> {
        for v in [self.prime() as u64, self.n_rows() as u64, self.n_cols() as u64] {
            w.write_all(&v.to_le_bytes())?;
        }
        let mut buf = Vec::with_capacity(self.data().len() * 4);
        for v in self.data() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_dump<R: Read>(mut r: R) -> Result<ModMatrix, LinalgError> {
        let mut header = [0u8; 24];
        r.read_exact(&mut header)?;
        let word = |i: usize| u64::from_le_bytes(header[i * 8..i * 8 + 8].try_into().expect("8 bytes"));
        let p = check_prime(word(0))?;
        let (rows, cols) = (word(1) as usize, word(2) as usize);
        let len = rows.checked_mul(cols).ok_or_else(|| LinalgError::BadDump("size overflow".into()))?;
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() != len * 4 {
            return Err(LinalgError::BadDump(format!("expected {} entry bytes, found {}", len * 4, bytes.len())));
        }
        let data: Vec<u32> = bytes.chunks_exact(4).map(|c| u32::from_le_bytes(c.try_into().expect("4 bytes"))).collect();
        if let Some(v) = data.iter().find(|&&v| v >= p) {
            return Err(LinalgError::BadDump(format!("entry {v} not reduced mod {p}")));
        }
        Ok(ModMatrix::from_raw(p, rows, cols, data))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = ModMatrix::from_rows(32003, 3, &[vec![1, -1, 7], vec![0, 5, 32002]]).unwrap();
        let mut buf = Vec::new();
        m.write_dump(&mut buf).unwrap();
        assert_eq!(buf.len(), 24 + 6 * 4);
        assert_eq!(&buf[..8], &32003u64.to_le_bytes());
        assert_eq!(ModMatrix::read_dump(buf.as_slice()).unwrap(), m);
        buf.pop();
        assert!(matches!(ModMatrix::read_dump(buf.as_slice()), Err(LinalgError::BadDump(_))));
    }
}
