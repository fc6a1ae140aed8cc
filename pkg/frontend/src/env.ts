/**
 * Client for the native benchmark's env-server: a JSON-lines
 * request/response protocol over the child process's stdio.
 *
 * All randomness lives on the native side, so a wrapped environment is
 * bit-for-bit identical to driving the suite natively with the same seed.
 */

import { spawn, type ChildProcessByStdio } from 'node:child_process';
import { createInterface, type Interface } from 'node:readline';
import type { Readable, Writable } from 'node:stream';

export interface StepResult {
    observation: number[];
    reward: number;
    done: boolean;
    info: Record<string, number>;
}

export interface SpaceInfo {
    observationDim: number;
    observationShape: number[];
    actionDim: number;
    actionLow: number[];
    actionHigh: number[];
    horizon: number;
}

/** Error reported by the native side (kind mirrors the native exception name). */
export class NativeEnvError extends Error {
    constructor(public readonly kind: string, message: string) {
        super(`${kind}: ${message}`);
        this.name = 'NativeEnvError';
    }
}

interface Reply {
    ok: boolean;
    error?: string;
    message?: string;
    [key: string]: unknown;
}

function defaultCommand(): string[] {
    const python = process.env.MTCONTROL_PYTHON ?? 'python3';
    return [python, '-m', 'mtcontrol', 'env-server'];
}

export class EnvServer {
    private child: ChildProcessByStdio<Writable, Readable, null>;
    private lines: Interface;
    private queue: Array<(reply: Reply) => void> = [];
    private closed = false;

    private constructor(command: string[]) {
        const [cmd, ...args] = command;
        this.child = spawn(cmd, args, { stdio: ['pipe', 'pipe', 'inherit'] });
        this.lines = createInterface({ input: this.child.stdout });
        this.lines.on('line', (line) => {
            const pending = this.queue.shift();
            if (pending) pending(JSON.parse(line) as Reply);
        });
    }

    static start(command?: string[]): EnvServer {
        return new EnvServer(command ?? defaultCommand());
    }

    rpc(request: Record<string, unknown>): Promise<Reply> {
        if (this.closed) return Promise.reject(new Error('server is shut down'));
        return new Promise((resolve, reject) => {
            this.queue.push((reply) => {
                if (!reply.ok) {
                    reject(new NativeEnvError(reply.error ?? 'Error',
                        reply.message ?? ''));
                } else {
                    resolve(reply);
                }
            });
            this.child.stdin.write(JSON.stringify(request) + '\n');
        });
    }

    /** Construct a registered environment by id; seeds the native instance. */
    async make(envId: string, seed: number): Promise<WrappedEnv> {
        const reply = await this.rpc({ op: 'make', env_id: envId, seed });
        const space: SpaceInfo = {
            observationDim: reply.observation_dim as number,
            observationShape: reply.observation_shape as number[],
            actionDim: reply.action_dim as number,
            actionLow: reply.action_low as number[],
            actionHigh: reply.action_high as number[],
            horizon: reply.horizon as number,
        };
        return new WrappedEnv(this, reply.handle as number, envId, space);
    }

    async shutdown(): Promise<void> {
        if (this.closed) return;
        this.closed = true;
        try {
            await new Promise<void>((resolve, reject) => {
                this.queue.push((reply) =>
                    reply.ok ? resolve() : reject(new Error('shutdown failed')));
                this.child.stdin.write(JSON.stringify({ op: 'shutdown' }) + '\n');
            });
        } finally {
            this.child.kill();
        }
    }
}

/**
 * One native environment instance behind a handle. Stateless apart from the
 * handle and the cached space description: every call delegates.
 */
export class WrappedEnv {
    constructor(
        private readonly server: EnvServer,
        private readonly handle: number,
        public readonly envId: string,
        public readonly space: SpaceInfo,
    ) {}

    async reset(): Promise<number[]> {
        const reply = await this.server.rpc({ op: 'reset', handle: this.handle });
        return reply.observation as number[];
    }

    async step(action: number[]): Promise<StepResult> {
        const reply = await this.server.rpc({
            op: 'step', handle: this.handle, action,
        });
        return {
            observation: reply.observation as number[],
            reward: reply.reward as number,
            done: reply.done as boolean,
            info: reply.info as Record<string, number>,
        };
    }

    /** Rewind the episode stream so the next reset repeats episode 0. */
    async seed(seed: number): Promise<void> {
        await this.server.rpc({ op: 'seed', handle: this.handle, seed });
    }

    async close(): Promise<void> {
        await this.server.rpc({ op: 'close', handle: this.handle });
    }
}
