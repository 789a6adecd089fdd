/**
 * Obstacle command path: drag events in, throttled bridge frames out.
 *
 * Rejects ids the current scene does not contain, throttles pointer-move
 * bursts to the command rate, and reports drops (unknown id or no
 * connection) through a notice callback instead of throwing.
 */

import { ObstacleCommand, TOPIC_UI_OBSTACLE_CMD } from "./protocol.js";
import { UiSceneState } from "./sceneState.js";
import { CommandThrottle, DEFAULT_COMMAND_INTERVAL_MS } from "./throttle.js";

/** Anything that can push a data frame toward the bridge. */
export interface CommandSink {
  send(topic: string, payload: unknown): boolean;
}

export interface ObstacleCommanderOptions {
  state: UiSceneState;
  connection: CommandSink;
  onNotice?: (message: string) => void;
  intervalMs?: number;
}

export class ObstacleCommander {
  private readonly state: UiSceneState;
  private readonly connection: CommandSink;
  private readonly onNotice: (message: string) => void;
  private readonly throttle: CommandThrottle<ObstacleCommand>;

  constructor(options: ObstacleCommanderOptions) {
    this.state = options.state;
    this.connection = options.connection;
    this.onNotice = options.onNotice ?? ((msg) => console.warn(`[ui] ${msg}`));
    this.throttle = new CommandThrottle<ObstacleCommand>(
      (cmd) => this.transmit(cmd),
      options.intervalMs ?? DEFAULT_COMMAND_INTERVAL_MS,
    );
  }

  /** Queue one move command; false when the id is unknown client-side. */
  moveTo(id: string, x: number, y: number): boolean {
    if (!this.state.hasObstacle(id)) {
      this.onNotice(`unknown obstacle "${id}", command rejected`);
      return false;
    }
    this.throttle.push({ id, x, y });
    return true;
  }

  dispose(): void {
    this.throttle.dispose();
  }

  private transmit(cmd: ObstacleCommand): void {
    const sent = this.connection.send(TOPIC_UI_OBSTACLE_CMD, { id: cmd.id, x: cmd.x, y: cmd.y });
    if (!sent) {
      this.onNotice("not connected, obstacle command dropped");
    }
  }
}
