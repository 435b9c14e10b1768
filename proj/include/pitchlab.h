/*
 * pitchlab — 2D robot-soccer reinforcement-learning workbench.
 *
 * C API over the simulation core: opaque handles, integer status codes,
 * thread-local error messages. Strings returned through char** out
 * parameters are heap-allocated; release them with pl_string_free().
 */

#ifndef PITCHLAB_H
#define PITCHLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pl_status {
  PL_OK = 0,
  PL_ERR_INVALID_ARGUMENT = 1,
  PL_ERR_CONFIG = 2,
  PL_ERR_IO = 3,
  PL_ERR_RUNTIME = 4,
} pl_status;

/* Library version string, static storage. */
const char* pl_version(void);

/* Message for the calling thread's most recent failure, static storage. */
const char* pl_last_error(void);

void pl_string_free(char* s);

/* ---- Configuration ------------------------------------------------- */

typedef struct pl_config pl_config;

pl_status pl_config_create_default(pl_config** out);
pl_status pl_config_load(const char* path, pl_config** out);
pl_status pl_config_loads(const char* json_text, pl_config** out);
void pl_config_destroy(pl_config* cfg);

/* Sets one key by dotted path, e.g. ("sim.dt", "0.05"). The value is JSON. */
pl_status pl_config_set(pl_config* cfg, const char* dotted_key, const char* json_value);

/* Applies environment overrides: <PREFIX>SECTION__KEY=value replaces
 * config key "section.key". prefix NULL means "PITCHLAB_". */
pl_status pl_config_apply_env(pl_config* cfg, const char* prefix);

pl_status pl_config_dump(const pl_config* cfg, char** json_out);

/* ---- Gym-style environment ------------------------------------------ */

/* One sub-policy bound to a training scenario. Instances are independent;
 * run as many in parallel as you like, one thread per instance. */
typedef struct pl_env pl_env;

/* policy: MID_FIELD | BALL_DUEL | NEAR_GOAL | POSITIONING.
 * scenario: BALL_DUEL_2V0 | MIDFIELD_1V0 | NEARGOAL_1V0 | POSITIONING |
 *           TOY_REACH_1V0, or NULL for the policy's default scenario.
 * fidelity: "LOW" | "HIGH" | NULL for the scenario's default. */
pl_status pl_env_create(const pl_config* cfg, const char* policy, const char* scenario,
                        const char* fidelity, uint64_t seed, pl_env** out);
void pl_env_destroy(pl_env* env);

int pl_env_obs_dim(const pl_env* env);
int pl_env_act_dim(const pl_env* env);

/* obs_out must hold obs_dim doubles. */
pl_status pl_env_reset(pl_env* env, double* obs_out);

/* action holds act_dim doubles in [-1, 1] (clipped on entry). On episode
 * end the environment resets itself and obs_out is the next episode's
 * first observation. terminal_out (optional) receives a static string:
 * RUNNING | GOAL | OUT_OF_BOUNDS | TIMEOUT. */
pl_status pl_env_step(pl_env* env, const double* action, double* obs_out, double* reward_out,
                      int* done_out, const char** terminal_out);

/* ---- Training -------------------------------------------------------- */

typedef struct pl_train_progress {
  int update;
  int64_t steps_done;
  int64_t total_steps;
  double mean_return; /* NaN when no episode finished during the update */
  double entropy;
} pl_train_progress;

typedef void (*pl_progress_fn)(const pl_train_progress* progress, void* user);

/* Trains one sub-policy with PPO and writes a weights file (plus an
 * optional learning-curve CSV). total_steps <= 0 uses the config value.
 * final_goal_rate_out (optional) receives the goal rate over the last 100
 * training episodes. */
pl_status pl_train(const pl_config* cfg, const char* policy, const char* scenario,
                   const char* fidelity, int64_t total_steps, uint64_t seed,
                   const char* weights_out_path, const char* curve_csv_path,
                   pl_progress_fn progress, void* user, double* final_goal_rate_out);

/* ---- Evaluation ------------------------------------------------------ */

/* experiment: DECOMPOSITION_1V2 | FIDELITY_NEARGOAL | ACTIONSPACE_DRIBBLE |
 *             ACTIONSPACE_WALKTIME.
 * weights_dir: holds <POLICY>.plw files; FIDELITY_NEARGOAL additionally
 * expects NEAR_GOAL_LOW.plw and NEAR_GOAL_HIGH.plw.
 * opponents: "GOALIE" | "GOALIE_DEFENDER" | NULL (FIDELITY_NEARGOAL only).
 * Either output pointer may be NULL. */
pl_status pl_experiment_run(const pl_config* cfg, const char* experiment, int episodes,
                            uint64_t seed, const char* weights_dir, const char* opponents,
                            char** report_json_out, char** table_out);

/* Re-runs one experiment episode and writes its JSON-lines replay trace.
 * condition names match the report's condition names. */
pl_status pl_replay_episode(const pl_config* cfg, const char* experiment, const char* condition,
                            int episode_index, uint64_t seed, const char* weights_dir,
                            const char* opponents, const char* trace_out_path);

/* ---- Diagnostics ------------------------------------------------------ */

/* Determinism/throughput self-checks; fails (PL_ERR_RUNTIME) when a check
 * fails. summary_json_out (optional) always receives the measurements. */
pl_status pl_selftest(const pl_config* cfg, char** summary_json_out);

/* Observation/action layout documentation; as_json != 0 for JSON. */
pl_status pl_layouts(int as_json, char** out);

#ifdef __cplusplus
}
#endif

#endif /* PITCHLAB_H */
