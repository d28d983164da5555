/** Rendered-frame cache that refetches when invalidated, coalescing
 * overlapping invalidations into at most one trailing request. */

import type { GatewayClient } from "./api.js";

export class FrameView {
  private client: GatewayClient;
  private width: number;
  private height: number;
  private inFlight: Promise<void> | null = null;
  private dirtyAgain = false;

  /** Latest PNG bytes received from the server, or null before first fetch. */
  frame: ArrayBuffer | null = null;
  /** Number of render requests actually issued (for instrumentation). */
  fetchCount = 0;
  /** Called each time a new frame arrives. */
  onFrame: ((frame: ArrayBuffer) => void) | null = null;

  constructor(client: GatewayClient, width = 640, height = 480) {
    this.client = client;
    this.width = width;
    this.height = height;
  }

  /** Mark the current frame stale and fetch a fresh one. Invalidations that
   * arrive while a fetch is running fold into a single follow-up fetch. */
  invalidate(): Promise<void> {
    if (this.inFlight) {
      this.dirtyAgain = true;
      return this.inFlight;
    }
    this.inFlight = this.fetchLoop();
    return this.inFlight;
  }

  private async fetchLoop(): Promise<void> {
    try {
      do {
        this.dirtyAgain = false;
        this.fetchCount += 1;
        const frame = await this.client.renderFrame(this.width, this.height);
        this.frame = frame;
        if (this.onFrame) this.onFrame(frame);
      } while (this.dirtyAgain);
    } finally {
      this.inFlight = null;
    }
  }
}
