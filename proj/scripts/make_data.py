#!/usr/bin/env python3
"""Regenerate the bundled grayscale test images under data/.

The classic 256x256 inpainting test crops (Barbara, Lena, GoldHill) are not
freely redistributable, so this script builds stand-ins from the public
scikit-image sample collection and writes them under the conventional names
used by the benchmark presets. Drop genuine crops over the same filenames to
reproduce published absolute PSNR figures; all relative comparisons hold for
the stand-ins as well.

  cameraman.pgm  skimage camera, 2x box-downsampled to 256x256 (the genuine
                 cameraman photograph at a different scale)
  lena.pgm       skimage astronaut, luma, downsampled to 256x256
  barbara.pgm    skimage brick texture blended with the astronaut portrait,
                 chosen for the strong periodic texture the NL-TV
                 regularizer needs
  goldhill.pgm   skimage moon, downsampled to 256x256
  barba128.pgm   central 128x128 crop of barbara.pgm
"""

import numpy as np
from skimage import data
from skimage.color import rgb2gray


def box2(img):
    return (img[0::2, 0::2] + img[1::2, 0::2] + img[0::2, 1::2] + img[1::2, 1::2]) / 4.0


def save_pgm(path, img):
    u8 = np.clip(np.floor(img * 255.0 + 0.5), 0, 255).astype(np.uint8)
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (u8.shape[1], u8.shape[0]))
        f.write(u8.tobytes())
    print(path, u8.shape)


def main():
    cam = box2(data.camera().astype(np.float64) / 255.0)
    save_pgm("data/cameraman.pgm", cam)

    lena = box2(rgb2gray(data.astronaut()))
    save_pgm("data/lena.pgm", lena)

    brick = box2(data.brick().astype(np.float64) / 255.0)
    # texture-dominant composite: brick texture over the portrait midtones
    barb = 0.6 * brick + 0.4 * lena
    save_pgm("data/barbara.pgm", barb)

    moon = box2(data.moon().astype(np.float64) / 255.0)
    save_pgm("data/goldhill.pgm", moon)

    save_pgm("data/barba128.pgm", barb[64:192, 64:192])


if __name__ == "__main__":
    main()
