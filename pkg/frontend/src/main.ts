/**
 * Browser entry point: wires the dashboard model to the page.
 *
 * The wallet is generated per page load; use the faucet section against a
 * dev gateway to fund it. Everything below is plain DOM wiring, the
 * behaviour lives in dashboard.ts.
 */

import { ApiClient } from "./api.js";
import { Dashboard } from "./dashboard.js";
import { renderError, renderHead, renderInventory, renderReceipt } from "./render.js";
import { Wallet } from "./wallet.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function num(id: string): number {
  const value = Number(el<HTMLInputElement>(id).value);
  if (!Number.isFinite(value)) throw new Error(`#${id} is not a number`);
  return value;
}

function text(id: string): string {
  return el<HTMLInputElement>(id).value.trim();
}

async function main(): Promise<void> {
  const base = text("base-url") || window.location.origin;
  const api = new ApiClient(base);
  const wallet = Wallet.random();
  const dash = new Dashboard(api, wallet);
  dash.connect(0);
  dash.track(wallet.address);

  el("wallet-address").textContent = wallet.address;

  const errorPanel = el("error-panel");
  const receiptPanel = el("receipt-panel");

  async function repaint(): Promise<void> {
    try {
      const head = await dash.refresh();
      el("head-panel").textContent = renderHead(head);
    } catch (err) {
      el("head-panel").textContent = String(err);
    }
    const panels = dash.tracked
      .map((addr) => renderInventory(addr, dash.inventory(addr)))
      .join("\n\n");
    el("inventory-panel").textContent = panels;
    errorPanel.textContent = renderError(dash.lastError);
  }

  async function runAction(fn: () => Promise<import("./dashboard.js").PendingTx>) {
    receiptPanel.textContent = "submitting…";
    try {
      const pending = await fn();
      receiptPanel.textContent = `queued ${pending.txid.slice(0, 12)}…`;
      const receipt = await pending.confirmed;
      receiptPanel.textContent = renderReceipt(receipt);
    } catch (err) {
      receiptPanel.textContent = String(err);
    }
    await repaint();
  }

  el("btn-track").onclick = () => {
    dash.track(text("track-address"));
    void repaint();
  };
  el("btn-faucet").onclick = () => {
    void api
      .faucet(wallet.address, num("faucet-amount"))
      .then(() => api.produceBlock())
      .then(() => repaint())
      .catch((err) => (errorPanel.textContent = String(err)));
  };
  el("btn-mint").onclick = () => {
    void runAction(() =>
      dash.mint(text("mint-name"), text("mint-category"), num("mint-rarity")),
    );
  };
  el("btn-transfer").onclick = () => {
    void runAction(() =>
      dash.transferAsset(num("transfer-asset-id"), text("transfer-to")),
    );
  };
  el("btn-send").onclick = () => {
    void runAction(() => dash.send(text("send-to"), num("send-amount")));
  };
  el("btn-swap").onclick = () => {
    void runAction(() =>
      dash.swap(
        num("swap-pool-id"),
        text("swap-direction") === "ba" ? "ba" : "ab",
        num("swap-amount-in"),
        num("swap-min-out"),
      ),
    );
  };
  el("btn-block").onclick = () => {
    void api
      .produceBlock()
      .then(() => repaint())
      .catch((err) => (errorPanel.textContent = String(err)));
  };

  await repaint();
  setInterval(() => void repaint(), 2_000);
}

window.addEventListener("DOMContentLoaded", () => {
  void main();
});
