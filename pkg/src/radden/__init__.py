"""radden: denoising autoencoders for cluttered radar signatures, plus the
synthetic signature generator and benchmark harness they are evaluated with."""

__version__ = "0.1.0"
