/**
 * Byte writer matching the gateway's canonical wire encoding.
 *
 * Rules: unsigned 64-bit integers are 8 bytes big-endian; strings are a
 * 4-byte big-endian length followed by UTF-8 bytes; addresses are raw 32
 * bytes; signatures are raw 64 bytes; tagged unions are one tag byte then
 * the variant's fields in declared order. Any drift here changes txids,
 * so the frozen cross-vectors in tests/codec.test.ts must keep passing.
 */

export { bytesToHex, hexToBytes } from "@noble/hashes/utils.js";

const U32_MAX = 0xffff_ffff;
const U64_MAX = (1n << 64n) - 1n;

export class Writer {
  private parts: Uint8Array[] = [];

  u8(value: number): this {
    if (!Number.isInteger(value) || value < 0 || value > 0xff) {
      throw new RangeError(`u8 out of range: ${value}`);
    }
    this.parts.push(Uint8Array.of(value));
    return this;
  }

  u32(value: number): this {
    if (!Number.isInteger(value) || value < 0 || value > U32_MAX) {
      throw new RangeError(`u32 out of range: ${value}`);
    }
    const buf = new Uint8Array(4);
    new DataView(buf.buffer).setUint32(0, value, false);
    this.parts.push(buf);
    return this;
  }

  u64(value: number | bigint): this {
    // UI amounts arrive as numbers; bigint keeps the full u64 range exact.
    const v = typeof value === "bigint" ? value : BigInt(value);
    if (typeof value === "number" && !Number.isSafeInteger(value)) {
      throw new RangeError(`u64 from unsafe number: ${value}`);
    }
    if (v < 0n || v > U64_MAX) {
      throw new RangeError(`u64 out of range: ${v}`);
    }
    const buf = new Uint8Array(8);
    new DataView(buf.buffer).setBigUint64(0, v, false);
    this.parts.push(buf);
    return this;
  }

  raw(data: Uint8Array, expectedLength?: number): this {
    if (expectedLength !== undefined && data.length !== expectedLength) {
      throw new RangeError(
        `raw field is ${data.length} bytes, expected ${expectedLength}`,
      );
    }
    this.parts.push(data);
    return this;
  }

  bytes(data: Uint8Array): this {
    this.u32(data.length);
    this.parts.push(data);
    return this;
  }

  str(text: string): this {
    return this.bytes(new TextEncoder().encode(text));
  }

  finish(): Uint8Array {
    const total = this.parts.reduce((n, p) => n + p.length, 0);
    const out = new Uint8Array(total);
    let offset = 0;
    for (const part of this.parts) {
      out.set(part, offset);
      offset += part.length;
    }
    return out;
  }
}
