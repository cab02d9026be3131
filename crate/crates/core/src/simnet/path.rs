//! Instance paths: the position of a protocol instance in a party's tree.

use std::fmt;

pub const MAX_DEPTH: usize = 15;

/// Fixed-capacity sequence of child indices, cheap to copy into every event.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    len: u8,
    seg: [u16; MAX_DEPTH],
}

impl Path {
    pub const ROOT: Path = Path { len: 0, seg: [0; MAX_DEPTH] };

    pub fn from_slice(segs: &[u16]) -> Path {
        let mut p = Path::ROOT;
        for &s in segs {
            p.push(s);
        }
        p
    }

    pub fn push(&mut self, seg: u16) {
        assert!((self.len as usize) < MAX_DEPTH, "instance tree too deep");
        self.seg[self.len as usize] = seg;
        self.len += 1;
    }

    pub fn pop(&mut self) {
        self.len -= 1;
    }

    pub fn child(mut self, seg: u16) -> Path {
        self.push(seg);
        self
    }

    pub fn depth(&self) -> usize {
        self.len as usize
    }

    pub fn segments(&self) -> &[u16] {
        &self.seg[..self.len as usize]
    }

    pub fn starts_with(&self, prefix: &[u16]) -> bool {
        self.segments().starts_with(prefix)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return f.write_str("/");
        }
        for s in self.segments() {
            write!(f, "/{s}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_pop_display() {
        let mut p = Path::ROOT.child(3).child(0);
        assert_eq!(p.to_string(), "/3/0");
        p.pop();
        assert_eq!(p.segments(), &[3]);
        assert!(Path::from_slice(&[3, 1, 2]).starts_with(&[3, 1]));
        assert_eq!(Path::ROOT.to_string(), "/");
    }
}
