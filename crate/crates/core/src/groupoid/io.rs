//! Binary and CSV records for kernels.
//!
//! Binary layout (little endian): magic, `x_start x_step` (f64), `x_count`
//! (u64), `t_start t_step` (f64), `t_count` (u64), flow `k` (u32), variant and
//! orientation (u8 each), then the samples row by row in `x` as `re, im`
//! pairs.

use super::{GroupoidKernel, TGrid, XGrid, DEFAULT_INTERP_POINTS};
use crate::coeff_ring::{read_complex_payload, write_complex_payload};
use crate::error::{Error, Result};
use crate::flow::{FlowModel, FlowVariant, Orientation};
use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use ndarray::Array2;
use std::io::{Read, Write};

pub const KERNEL_MAGIC: &[u8; 4] = b"GKR1";

impl GroupoidKernel {
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(KERNEL_MAGIC)?;
        w.write_f64::<LittleEndian>(self.x.start)?;
        w.write_f64::<LittleEndian>(self.x.step)?;
        w.write_u64::<LittleEndian>(self.x.count as u64)?;
        w.write_f64::<LittleEndian>(self.t.start())?;
        w.write_f64::<LittleEndian>(self.t.step())?;
        w.write_u64::<LittleEndian>(self.t.count() as u64)?;
        w.write_u32::<LittleEndian>(self.flow.k())?;
        w.write_u8(match self.flow.variant() {
            FlowVariant::Monomial => 0,
            FlowVariant::CompleteRescaled => 1,
        })?;
        w.write_u8(match self.flow.orientation() {
            Orientation::Forward => 0,
            Orientation::Reversed => 1,
        })?;
        let data: Vec<_> = self.samples.iter().copied().collect();
        write_complex_payload(&mut w, &data)
    }

    /// Reads a record and re-runs the construction checks.
    pub fn read_binary<R: Read>(mut r: R) -> Result<GroupoidKernel> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != KERNEL_MAGIC {
            return Err(Error::Format(format!("bad magic {magic:?}")));
        }
        let x = XGrid::new(
            r.read_f64::<LittleEndian>()?,
            r.read_f64::<LittleEndian>()?,
            r.read_u64::<LittleEndian>()? as usize,
        )?;
        let t = TGrid::new(
            r.read_f64::<LittleEndian>()?,
            r.read_f64::<LittleEndian>()?,
            r.read_u64::<LittleEndian>()? as usize,
        )?;
        let k = r.read_u32::<LittleEndian>()?;
        let variant = match r.read_u8()? {
            0 => FlowVariant::Monomial,
            1 => FlowVariant::CompleteRescaled,
            v => return Err(Error::Format(format!("unknown flow variant tag {v}"))),
        };
        let mut flow = FlowModel::new(k, variant)?;
        match r.read_u8()? {
            0 => {}
            1 => flow = flow.reversed(),
            v => return Err(Error::Format(format!("unknown orientation tag {v}"))),
        }
        let data = read_complex_payload(&mut r, x.count * t.count())?;
        let samples = Array2::from_shape_vec((x.count, t.count()), data)
            .map_err(|e| Error::Format(format!("sample block: {e}")))?;
        Ok(GroupoidKernel::new(flow, x, t, samples)?.with_interpolation(DEFAULT_INTERP_POINTS))
    }

    /// One line per node: `x,t,re,im`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["x", "t", "re", "im"])?;
        for ((i, j), v) in self.samples.indexed_iter() {
            out.serialize((self.x.at(i), self.t.at(j), v.re, v.im))?;
        }
        out.flush()?;
        Ok(())
    }
}
