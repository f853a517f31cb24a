// Pattern: P3 defer2
// Expected: NoDeadlock
//
// A deferred call that itself defers; the sends happen inner-last.
package main

import "fmt"

func main() {
	ch := make(chan int)
	go func() {
		defer func() {
			defer func() {
				ch <- 2
			}()
			ch <- 1
		}()
		fmt.Println("worker body")
	}()
	fmt.Println(<-ch)
	fmt.Println(<-ch)
}
