"""MSB-first bit packing and exp-Golomb codes."""

from .errors import TruncatedStreamError


class BitWriter:
    def __init__(self):
        self._chunks = []
        self._nbits = 0

    def __len__(self):
        return self._nbits

    def write(self, value, nbits):
        if nbits == 0:
            return
        if value < 0 or value >> nbits:
            raise ValueError(f"{value} does not fit in {nbits} bits")
        self._chunks.append(format(value, f"0{nbits}b"))
        self._nbits += nbits

    def write_bits(self, bitstring):
        """Append a pre-formatted string of '0'/'1' characters."""
        self._chunks.append(bitstring)
        self._nbits += len(bitstring)

    def write_ue(self, value):
        """Unsigned exp-Golomb, order 0."""
        if value < 0:
            raise ValueError("exp-Golomb codes non-negative integers only")
        v = value + 1
        n = v.bit_length()
        self.write(v, 2 * n - 1)

    def getvalue(self):
        bits = "".join(self._chunks)
        bits += "0" * (-len(bits) % 8)
        if not bits:
            return b""
        return int(bits, 2).to_bytes(len(bits) // 8, "big")


class BitReader:
    def __init__(self, data):
        data = bytes(data)
        self._bits = format(int.from_bytes(data, "big"), f"0{8 * len(data)}b") if data else ""
        self.pos = 0

    @property
    def remaining(self):
        return len(self._bits) - self.pos

    def read(self, nbits):
        if nbits == 0:
            return 0
        end = self.pos + nbits
        if end > len(self._bits):
            raise TruncatedStreamError(f"needed {nbits} bits at bit offset {self.pos}, stream ends")
        v = int(self._bits[self.pos:end], 2)
        self.pos = end
        return v

    def read_bit(self):
        if self.pos >= len(self._bits):
            raise TruncatedStreamError(f"stream ends at bit offset {self.pos}")
        b = self._bits[self.pos] == "1"
        self.pos += 1
        return b

    def read_ue(self):
        zeros = 0
        while not self.read_bit():
            zeros += 1
            if zeros > 64:
                raise TruncatedStreamError("exp-Golomb prefix runs past 64 bits")
        return (1 << zeros) - 1 + self.read(zeros)


def signed_to_index(v):
    """0, -1, 1, -2, ... -> 0, 1, 2, 3, ..."""
    return 2 * v if v >= 0 else -2 * v - 1


def index_to_signed(u):
    return u // 2 if u % 2 == 0 else -(u + 1) // 2
