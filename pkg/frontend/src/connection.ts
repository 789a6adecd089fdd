/**
 * Bridge connection with automatic reconnect and staleness tracking.
 *
 * Wraps one WebSocket to the bridge. On open it sends the subscribe
 * control frame; every parsed data frame goes to onFrame. A dropped
 * connection schedules a reconnect, and a connected socket that stays
 * silent past the stale threshold flips the status to "stale" until the
 * next frame arrives. The WebSocket constructor is injectable so tests
 * can run without a network.
 */

import { BridgeFrame, decodeFrame, encodeSubscribe } from "./protocol.js";

export type ConnectionStatus = "connecting" | "connected" | "stale" | "disconnected";

/** The subset of the WebSocket API the connection relies on. */
export interface SocketLike {
  onopen: (() => void) | null;
  onmessage: ((event: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
  readyState: number;
  send(data: string): void;
  close(): void;
}

export type SocketFactory = (url: string) => SocketLike;

const SOCKET_OPEN = 1;

export interface BridgeConnectionOptions {
  url: string;
  patterns: string[];
  onFrame: (frame: BridgeFrame) => void;
  onStatus?: (status: ConnectionStatus) => void;
  reconnectDelayMs?: number;
  staleAfterMs?: number;
  socketFactory?: SocketFactory;
}

export class BridgeConnection {
  private readonly url: string;
  private readonly patterns: string[];
  private readonly onFrame: (frame: BridgeFrame) => void;
  private readonly onStatus: (status: ConnectionStatus) => void;
  private readonly reconnectDelayMs: number;
  private readonly staleAfterMs: number;
  private readonly socketFactory: SocketFactory;

  private socket: SocketLike | null = null;
  private status: ConnectionStatus = "disconnected";
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;
  private staleTimer: ReturnType<typeof setTimeout> | null = null;
  private closed = false;

  constructor(options: BridgeConnectionOptions) {
    this.url = options.url;
    this.patterns = options.patterns.slice();
    this.onFrame = options.onFrame;
    this.onStatus = options.onStatus ?? (() => undefined);
    this.reconnectDelayMs = options.reconnectDelayMs ?? 1000;
    this.staleAfterMs = options.staleAfterMs ?? 2000;
    this.socketFactory = options.socketFactory ?? ((url) => new WebSocket(url) as SocketLike);
  }

  get currentStatus(): ConnectionStatus {
    return this.status;
  }

  connect(): void {
    if (this.closed) return;
    this.setStatus("connecting");
    let socket: SocketLike;
    try {
      socket = this.socketFactory(this.url);
    } catch (err) {
      console.warn(`[bridge] connect to ${this.url} failed:`, err);
      this.scheduleReconnect();
      return;
    }
    this.socket = socket;
    socket.onopen = () => {
      socket.send(encodeSubscribe(this.patterns));
      this.setStatus("connected");
      this.armStaleTimer();
    };
    socket.onmessage = (event) => {
      if (typeof event.data !== "string") return;
      const frame = decodeFrame(event.data);
      if (frame === null) return;
      if (this.status === "stale") this.setStatus("connected");
      this.armStaleTimer();
      this.onFrame(frame);
    };
    socket.onclose = () => {
      this.socket = null;
      this.clearStaleTimer();
      this.setStatus("disconnected");
      this.scheduleReconnect();
    };
    socket.onerror = () => {
      // the close handler owns recovery; some sockets fire error only
      if (this.socket === socket && socket.readyState !== SOCKET_OPEN) {
        socket.close();
      }
    };
  }

  /** Send one data frame; false when not connected (caller shows a notice). */
  send(topic: string, payload: unknown): boolean {
    if (this.socket === null || this.socket.readyState !== SOCKET_OPEN) {
      return false;
    }
    this.socket.send(JSON.stringify({ topic, payload }));
    return true;
  }

  close(): void {
    this.closed = true;
    this.clearStaleTimer();
    if (this.reconnectTimer !== null) {
      clearTimeout(this.reconnectTimer);
      this.reconnectTimer = null;
    }
    if (this.socket !== null) {
      this.socket.close();
      this.socket = null;
    }
    this.setStatus("disconnected");
  }

  private setStatus(status: ConnectionStatus): void {
    if (this.status === status) return;
    this.status = status;
    this.onStatus(status);
  }

  private scheduleReconnect(): void {
    if (this.closed || this.reconnectTimer !== null) return;
    this.reconnectTimer = setTimeout(() => {
      this.reconnectTimer = null;
      this.connect();
    }, this.reconnectDelayMs);
  }

  private armStaleTimer(): void {
    this.clearStaleTimer();
    this.staleTimer = setTimeout(() => {
      this.staleTimer = null;
      if (this.status === "connected") this.setStatus("stale");
    }, this.staleAfterMs);
  }

  private clearStaleTimer(): void {
    if (this.staleTimer !== null) {
      clearTimeout(this.staleTimer);
      this.staleTimer = null;
    }
  }
}
