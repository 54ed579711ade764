/* Exercises the C API end to end: load, train, predict, save, reload. */
#include <stdio.h>
#include <string.h>

#include "mtr.h"

#define CHECK(expr)                                                      \
    do {                                                                 \
        MtrStatus status_ = (expr);                                      \
        if (status_ != MTR_OK) {                                         \
            fprintf(stderr, "%s failed (%d): %s\n", #expr, (int)status_, \
                    mtr_last_error());                                   \
            return 1;                                                    \
        }                                                                \
    } while (0)

int main(int argc, char **argv) {
    if (argc != 3) {
        fprintf(stderr, "usage: %s <dataset.arff> <model-out>\n", argv[0]);
        return 2;
    }

    MtrDataset *dataset = NULL;
    CHECK(mtr_dataset_load(argv[1], 2, &dataset));
    size_t d = mtr_dataset_features(dataset);
    size_t m = mtr_dataset_targets(dataset);
    printf("loaded %zu rows, %zu features, %zu targets\n",
           mtr_dataset_rows(dataset), d, m);
    if (m != 2) return 1;

    MtrTrainedModel *model = NULL;
    CHECK(mtr_train(dataset, "ercc", 3, 2, 10, 42, &model));

    double x[64] = {0};
    double y[2] = {0}, y2[2] = {0};
    for (size_t j = 0; j < d && j < 64; j++) x[j] = 0.25 * (double)j;
    CHECK(mtr_model_predict(model, x, d, y));

    CHECK(mtr_model_save(model, argv[2]));
    MtrTrainedModel *reloaded = NULL;
    CHECK(mtr_model_load(argv[2], &reloaded));
    CHECK(mtr_model_predict(reloaded, x, d, y2));
    if (memcmp(y, y2, sizeof(y)) != 0) {
        fprintf(stderr, "reloaded model predictions differ\n");
        return 1;
    }
    printf("prediction: %f %f\n", y[0], y[1]);

    /* wrong width must fail cleanly */
    if (mtr_model_predict(model, x, d + 1, y) != MTR_ERROR) {
        fprintf(stderr, "width mismatch not detected\n");
        return 1;
    }

    mtr_model_free(reloaded);
    mtr_model_free(model);
    mtr_dataset_free(dataset);
    puts("ok");
    return 0;
}
