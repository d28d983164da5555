/** Toolbar record toggle: arms server-side command recording and hands the
 * finished script to a download callback when stopped. */

import type { GatewayClient } from "./api.js";

export interface ScriptDownload {
  filename: string;
  text: string;
}

export class RecordToggle {
  active = false;

  constructor(
    private readonly client: GatewayClient,
    /** Receives the script on stop; the browser shell turns it into a
     * file download, tests just capture it. */
    private readonly download: (script: ScriptDownload) => void,
  ) {}

  /** Flip recording state. Returns the new state. */
  async toggle(): Promise<boolean> {
    if (!this.active) {
      await this.client.startRecording();
      this.active = true;
    } else {
      const text = await this.client.stopRecording();
      this.active = false;
      this.download({ filename: "session.mvr.jsonl", text });
    }
    return this.active;
  }

  /** Re-sync with the server, e.g. after a reconnect. */
  async refresh(): Promise<void> {
    this.active = await this.client.recordActive();
  }
}
