//! Scoped flush-to-zero / denormals-are-zero floating point mode.
//!
//! Amplitudes beyond the ballistic front decay faster than exponentially and
//! pass through the subnormal range on their way to zero. Subnormal
//! arithmetic is one to two orders of magnitude slower on x86, and the values
//! involved are below 1e-308, so they are flushed instead.

#[cfg(target_arch = "x86_64")]
mod imp {
    #[allow(deprecated)]
    use std::arch::x86_64::{_mm_getcsr, _mm_setcsr};

    const FTZ_DAZ: u32 = 0x8040;

    pub struct FlushDenormals {
        saved: u32,
    }

    impl FlushDenormals {
        #[allow(deprecated)]
        pub fn enable() -> Self {
            // SAFETY: SSE is part of the x86_64 baseline; only the FTZ and DAZ
            // bits are changed and the previous state is restored on drop.
            let saved = unsafe { _mm_getcsr() };
            unsafe { _mm_setcsr(saved | FTZ_DAZ) };
            FlushDenormals { saved }
        }
    }

    impl Drop for FlushDenormals {
        #[allow(deprecated)]
        fn drop(&mut self) {
            // SAFETY: restores the control word read in `enable`.
            unsafe { _mm_setcsr(self.saved) };
        }
    }
}

#[cfg(not(target_arch = "x86_64"))]
mod imp {
    pub struct FlushDenormals;

    impl FlushDenormals {
        pub fn enable() -> Self {
            FlushDenormals
        }
    }
}

pub(crate) use imp::FlushDenormals;
