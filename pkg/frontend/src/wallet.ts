/**
 * In-browser wallet: an Ed25519 seed kept in memory.
 *
 * The chain's address is the raw 32-byte public key, so there is no extra
 * hashing or checksum step between the keypair and the account.
 */

import { ed25519 } from "@noble/curves/ed25519.js";

import { bytesToHex } from "./codec.js";
import { attachSignature, encodeUnsigned, Payload, SignedTx } from "./tx.js";

export class Wallet {
  readonly publicKey: Uint8Array;
  readonly address: string;

  private constructor(private readonly seed: Uint8Array) {
    this.publicKey = ed25519.getPublicKey(seed);
    this.address = bytesToHex(this.publicKey);
  }

  static fromSeed(seed: Uint8Array): Wallet {
    if (seed.length !== 32) {
      throw new RangeError(`seed must be 32 bytes, got ${seed.length}`);
    }
    return new Wallet(seed);
  }

  static random(): Wallet {
    return new Wallet(crypto.getRandomValues(new Uint8Array(32)));
  }

  sign(message: Uint8Array): Uint8Array {
    return ed25519.sign(message, this.seed);
  }

  signTx(nonce: number | bigint, payload: Payload): SignedTx {
    const body = encodeUnsigned(this.publicKey, nonce, payload);
    return attachSignature(body, this.sign(body));
  }
}
