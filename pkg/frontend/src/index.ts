export { EnvServer, WrappedEnv, NativeEnvError } from './env.js';
export type { StepResult, SpaceInfo } from './env.js';
