#if defined(OFFLOAD_BY_OPENACC)
#if defined(OFFLOAD_BY_OPENACC_KERNELS)
#define OFFLOAD() _Pragma("acc kernels") _Pragma("acc loop")
#else
#define OFFLOAD() _Pragma("acc parallel") _Pragma("acc loop")
#endif
#endif
#if defined(OFFLOAD_BY_OPENMP_TARGET)
#if defined(OFFLOAD_BY_OPENMP_TARGET_LOOP)
#define OFFLOAD() _Pragma("omp target teams loop")
#else
#define OFFLOAD() _Pragma("omp target teams distribute parallel for")
#endif
#endif

  OFFLOAD()
  for (int i = 0; i < N_i; i++) {
    // loop body A
  }

  OFFLOAD()
  for (int j = 0; j < N_j; j++) {
    // loop body B
  }
