/* C API for the relukit shared library.
 *
 * All objects are opaque handles; every fallible function returns an
 * rk_status and reports details through rk_last_error(), which is
 * thread-local. Handles must be released with rk_network_free; strings
 * returned through out-parameters with rk_string_free.
 */
#ifndef RELUKIT_H
#define RELUKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RELUKIT_API __declspec(dllexport)
#else
#define RELUKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rk_status {
    RK_OK = 0,
    RK_ERR_INVALID_ARGUMENT = 1,
    RK_ERR_IO = 2,
    RK_ERR_DECODE = 3,
    RK_ERR_INTERNAL = 4
} rk_status;

typedef struct rk_network rk_network;

/* Message for the most recent failure on this thread; never NULL. */
RELUKIT_API const char* rk_last_error(void);

RELUKIT_API void rk_network_free(rk_network* net);
RELUKIT_API void rk_string_free(char* text);

/* Network JSON interchange format. */
RELUKIT_API rk_status rk_network_from_json(const char* json_text, rk_network** out);
RELUKIT_API rk_status rk_network_to_json(const rk_network* net, char** out_text);
RELUKIT_API rk_status rk_network_load(const char* path, rk_network** out);
RELUKIT_API rk_status rk_network_save(const rk_network* net, const char* path);

/* Shape and complexity queries. */
RELUKIT_API size_t rk_network_input_dim(const rk_network* net);
RELUKIT_API size_t rk_network_output_dim(const rk_network* net);
RELUKIT_API size_t rk_network_depth(const rk_network* net);
RELUKIT_API size_t rk_network_num_weights(const rk_network* net);
RELUKIT_API size_t rk_network_num_neurons(const rk_network* net);

/* Evaluates the realization at x (length dim); out must hold out_dim values. */
RELUKIT_API rk_status rk_network_eval(const rk_network* net, const double* x, size_t dim,
                                      double* out, size_t out_dim);

/* Joins all invariant violations into one newline-separated string; sets
 * *out_text to NULL when the network is well formed. */
RELUKIT_API rk_status rk_network_validate(const rk_network* net, char** out_text);

/* Builds the network described by a target-spec JSON document at accuracy
 * eps in L^p. quant_s (optional) receives the smallest quantization level s
 * such that all weights are (s, eps)-quantized, or 0 if none <= 64 works. */
RELUKIT_API rk_status rk_build_target(const char* target_json, double eps, double p,
                                      rk_network** out, int* quant_s);

/* Measured distance between the target's ground truth and the network:
 * L^p over the target's domain (seeded Monte-Carlo above dimension 3,
 * midpoint grid otherwise), or a sup-grid for sup-norm targets. */
RELUKIT_API rk_status rk_target_error(const char* target_json, const rk_network* net, double p,
                                      long long resolution, uint64_t seed, double* out_error);
RELUKIT_API rk_status rk_target_dim(const char* target_json, size_t* out_dim);
/* Theoretical weight-rate exponent for sweep reports; NaN when not applicable. */
RELUKIT_API rk_status rk_target_rate(const char* target_json, double p, double* out_rate);

/* Dead-neuron removal preserving the realization exactly (scalar output). */
RELUKIT_API rk_status rk_simplify(const rk_network* net, rk_network** out);

/* Bit-exact encode/decode through the .nnc container. Encoding simplifies
 * first and reports the payload length in bits. */
RELUKIT_API rk_status rk_encode_file(const rk_network* net, const char* path, uint32_t M,
                                     uint32_t K, uint64_t* out_bits);
RELUKIT_API rk_status rk_decode_file(const char* path, rk_network** out);

/* Affine-piece probes along a slice t -> net(x0 + t v). */
RELUKIT_API rk_status rk_count_slice_pieces(const rk_network* net, const double* x0,
                                            const double* v, double t_lo, double t_hi,
                                            long long resolution, double tol, long long* out);
RELUKIT_API rk_status rk_piece_bound(const rk_network* net, double* out);

/* Least-squares slope of log M versus log(1/eps); needs n >= 3. */
RELUKIT_API rk_status rk_rate_fit(const double* eps, const double* M, size_t n, double* out_slope);

#ifdef __cplusplus
}
#endif

#endif /* RELUKIT_H */
