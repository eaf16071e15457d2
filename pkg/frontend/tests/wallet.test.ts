/**
 * Ed25519 conformance. The first fixture is RFC 8032 section 7.1 TEST 1;
 * getting it wrong means every signature the wallet makes is garbage.
 */

import { describe, expect, it } from "vitest";

import { ed25519 } from "@noble/curves/ed25519.js";

import { bytesToHex, hexToBytes } from "../src/codec.js";
import { Wallet } from "../src/wallet.js";

const RFC_SECRET = hexToBytes(
  "9d61b19deffd5a60ba844af492ec2cc44449c5697b326919703bac031cae7f60",
);
const RFC_PUBLIC =
  "d75a980182b10ab7d54bfed3c964073a0ee172f3daa62325af021a68f707511a";
const RFC_SIGNATURE =
  "e5564300c360ac729086e2cc806e828a84877f1eb8e5d974d873e06522490155" +
  "5fb8821590a33bacc61e39701cf9b46bd25bf5f0595bbe24655141438e7a100b";

describe("wallet", () => {
  it("matches RFC 8032 TEST 1", () => {
    const wallet = Wallet.fromSeed(RFC_SECRET);
    expect(wallet.address).toBe(RFC_PUBLIC);
    const signature = wallet.sign(new Uint8Array(0));
    expect(bytesToHex(signature)).toBe(RFC_SIGNATURE);
  });

  it("produces signatures the curve accepts", () => {
    const wallet = Wallet.fromSeed(new Uint8Array(32).fill(9));
    const message = new TextEncoder().encode("state transition");
    const signature = wallet.sign(message);
    expect(ed25519.verify(signature, message, wallet.publicKey)).toBe(true);
    // flip one bit: must not verify
    const forged = signature.slice();
    forged[0] ^= 1;
    expect(ed25519.verify(forged, message, wallet.publicKey)).toBe(false);
  });

  it("uses the raw public key as the account address", () => {
    const wallet = Wallet.fromSeed(new Uint8Array(32).fill(7));
    expect(wallet.address).toBe(bytesToHex(wallet.publicKey));
    expect(wallet.address).toHaveLength(64);
  });

  it("refuses seeds of the wrong size", () => {
    expect(() => Wallet.fromSeed(new Uint8Array(31))).toThrow(RangeError);
  });

  it("generates distinct random wallets", () => {
    expect(Wallet.random().address).not.toBe(Wallet.random().address);
  });
});
