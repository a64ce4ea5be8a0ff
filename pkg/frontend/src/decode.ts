// Base64 gray8 frames -> RGBA pixel buffers, reusing allocations per size.

export class FrameDecoder {
  private gray: Uint8Array = new Uint8Array(0);
  private rgba: Uint8ClampedArray = new Uint8ClampedArray(0);

  /** Decode base64 into the reused gray buffer; length must match w*h. */
  decodeBase64(data: string, width: number, height: number): Uint8Array {
    const expected = width * height;
    const binary = atob(data);
    if (binary.length !== expected) {
      throw new Error(`frame payload is ${binary.length} bytes, expected ${expected}`);
    }
    if (this.gray.length !== expected) {
      this.gray = new Uint8Array(expected);
    }
    for (let i = 0; i < expected; i++) {
      this.gray[i] = binary.charCodeAt(i);
    }
    return this.gray;
  }

  /** Expand the gray buffer to RGBA (reused) for putImageData. */
  toRgba(gray: Uint8Array): Uint8ClampedArray {
    const n = gray.length;
    if (this.rgba.length !== n * 4) {
      this.rgba = new Uint8ClampedArray(n * 4);
    }
    const out = this.rgba;
    for (let i = 0, j = 0; i < n; i++, j += 4) {
      const v = gray[i];
      out[j] = v;
      out[j + 1] = v;
      out[j + 2] = v;
      out[j + 3] = 255;
    }
    return out;
  }
}
