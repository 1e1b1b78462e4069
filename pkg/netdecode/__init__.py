# Multishot adversarial network decoding toolkit

__version__ = "1.0.0"
